#include <charconv>
#include "cew/contraction_ring.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cew/errors.hpp"

namespace cew {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("not a rational literal: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (sgn(den) == 0) throw bad();
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  mpz_class mantissa = 0;
  long scale = 0;
  bool digits = false;
  bool after_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (after_point) --scale;
      digits = true;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!digits) throw bad();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw bad();
    std::size_t used = 0;
    long exponent = 0;
    try {
      exponent = std::stol(s.substr(pos + 1), &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != s.size() - pos - 1) throw bad();
    scale += exponent;
  }
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational value = scale >= 0 ? Rational(mantissa * power) : Rational(mantissa, power);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool rational_sqrt(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return false;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o) {
  Rational n = o.norm();
  if (sgn(n) == 0) throw std::domain_error("complex rational division by zero");
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

std::string to_string(const ComplexRational& z) {
  if (z.is_real()) return to_string(z.re());
  if (sgn(z.re()) == 0) return to_string(z.im()) + "i";
  std::string im = to_string(abs(z.im()));
  return "(" + to_string(z.re()) + (sgn(z.im()) < 0 ? " - " : " + ") + im + "i)";
}

JMode JMode::numeric(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("numeric contraction parameter must be finite and >= 0");
  }
  return JMode(Kind::Numeric, value);
}

JMode JMode::parse(std::string_view text) {
  if (text == "1" || text == "one") return one();
  if (text == "iota" || text == "nilpotent") return nilpotent();
  const Rational r = parse_rational(text);
  // mpq get_d truncates. The quotient below is correctly rounded whenever
  // numerator and denominator fit in 53 bits.
  return numeric(r.get_num().get_d() / r.get_den().get_d());
}

std::string JMode::name() const {
  switch (kind_) {
    case Kind::One:
      return "1";
    case Kind::Nilpotent:
      return "iota";
    case Kind::Numeric: {
      char buffer[32];
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value_);
      return std::string(buffer, end);
    }
  }
  return "?";
}

ContractionScalar::ContractionScalar(const ComplexRational& c) { add_term(0, c); }

ContractionScalar ContractionScalar::make(const Rational& re, const Rational& im, int degree) {
  if (degree < 0) throw std::invalid_argument("negative j-degree");
  ContractionScalar out;
  out.add_term(degree, ComplexRational(re, im));
  return out;
}

void ContractionScalar::add_term(int degree, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(degree, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

ComplexRational ContractionScalar::coefficient(int degree) const {
  auto it = coeffs_.find(degree);
  return it == coeffs_.end() ? ComplexRational() : it->second;
}

int ContractionScalar::max_degree() const {
  return coeffs_.empty() ? -1 : coeffs_.rbegin()->first;
}

ContractionScalar ContractionScalar::operator-() const {
  ContractionScalar out;
  for (const auto& [d, c] : coeffs_) out.coeffs_.emplace(d, -c);
  return out;
}

ContractionScalar& ContractionScalar::operator+=(const ContractionScalar& o) {
  for (const auto& [d, c] : o.coeffs_) add_term(d, c);
  return *this;
}

ContractionScalar& ContractionScalar::operator-=(const ContractionScalar& o) {
  for (const auto& [d, c] : o.coeffs_) add_term(d, -c);
  return *this;
}

ContractionScalar operator*(const ContractionScalar& a, const ContractionScalar& b) {
  ContractionScalar out;
  for (const auto& [da, ca] : a.coeffs_) {
    for (const auto& [db, cb] : b.coeffs_) out.add_term(da + db, ca * cb);
  }
  return out;
}

ContractionScalar ContractionScalar::conj() const {
  ContractionScalar out;
  for (const auto& [d, c] : coeffs_) out.coeffs_.emplace(d, c.conj());
  return out;
}

ContractionScalar ContractionScalar::div_j() const {
  if (coeffs_.count(0) != 0) {
    throw DivisionUndefined("division by j of a scalar with nonzero j^0 part: " + to_string(*this));
  }
  ContractionScalar out;
  for (const auto& [d, c] : coeffs_) out.coeffs_.emplace(d - 1, c);
  return out;
}

ContractionScalar ContractionScalar::times_j(int power) const {
  if (power < 0) throw std::invalid_argument("negative j power");
  ContractionScalar out;
  for (const auto& [d, c] : coeffs_) out.coeffs_.emplace(d + power, c);
  return out;
}

ContractionScalar ContractionScalar::reduce(const JMode& mode) const {
  ContractionScalar out;
  switch (mode.kind()) {
    case JMode::Kind::One:
      for (const auto& [d, c] : coeffs_) out.add_term(0, c);
      break;
    case JMode::Kind::Nilpotent:
      for (const auto& [d, c] : coeffs_) {
        if (d < 2) out.add_term(d, c);
      }
      break;
    case JMode::Kind::Numeric:
      throw std::invalid_argument("exact reduction requested in numeric mode");
  }
  return out;
}

std::complex<double> ContractionScalar::evaluate(double j) const {
  std::complex<double> sum = 0.0;
  for (const auto& [d, c] : coeffs_) sum += c.to_complex() * std::pow(j, d);
  return sum;
}

std::string to_string(const ContractionScalar& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [d, c] : x.coefficients()) {
    if (!out.empty()) out += " + ";
    out += to_string(c);
    if (d == 1) out += " j";
    if (d > 1) out += " j^" + std::to_string(d);
  }
  return out;
}

ReducedScalar reduce(const ContractionScalar& x, const JMode& mode) {
  if (mode.kind() == JMode::Kind::Numeric) return x.evaluate(mode.value());
  return x.reduce(mode);
}

}  // namespace cew
