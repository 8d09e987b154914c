#pragma once

// Exact arithmetic in the contraction parameter j.
//
// A ContractionScalar is a polynomial sum_n c_n j^n with exact complex
// rational coefficients. The full grading is kept through every ring
// operation; the choice j = 1, j = iota (iota^2 = 0) or j = eps is applied
// only when a value is reduced.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace cew {

using Rational = mpq_class;

/// Parses "3", "-3/4", "0.652" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
/// Exact square root if q is the square of a rational.
bool rational_sqrt(const Rational& q, Rational& root);

class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(Rational re, Rational im = Rational(0))  // NOLINT
      : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  ComplexRational(long v) : re_(v) {}  // NOLINT

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  ComplexRational conj() const { return {re_, -im_}; }
  /// |z|^2
  Rational norm() const { return re_ * re_ + im_ * im_; }
  std::complex<double> to_complex() const {
    return {re_.get_d(), im_.get_d()};
  }

  ComplexRational operator-() const { return {-re_, -im_}; }
  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);
  ComplexRational& operator/=(const ComplexRational& o);

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

std::string to_string(const ComplexRational& z);

/// How the contraction parameter is evaluated.
class JMode {
 public:
  enum class Kind { One, Nilpotent, Numeric };

  static JMode one() { return JMode(Kind::One, 1.0); }
  static JMode nilpotent() { return JMode(Kind::Nilpotent, 0.0); }
  /// Throws std::invalid_argument unless value is finite and >= 0.
  static JMode numeric(double value);
  /// "1", "iota" or a decimal literal.
  static JMode parse(std::string_view text);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  bool exact() const { return kind_ != Kind::Numeric; }
  std::string name() const;

  friend bool operator==(const JMode& a, const JMode& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

 private:
  JMode(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

class ContractionScalar {
 public:
  ContractionScalar() = default;
  ContractionScalar(const ComplexRational& c);  // NOLINT
  ContractionScalar(long v) : ContractionScalar(ComplexRational(v)) {}  // NOLINT

  /// (re + i im) j^degree; throws std::invalid_argument for degree < 0.
  static ContractionScalar make(const Rational& re, const Rational& im, int degree);
  static ContractionScalar j() { return make(1, 0, 1); }

  const std::map<int, ComplexRational>& coefficients() const { return coeffs_; }
  ComplexRational coefficient(int degree) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero scalar.
  int max_degree() const;

  ContractionScalar operator-() const;
  ContractionScalar& operator+=(const ContractionScalar& o);
  ContractionScalar& operator-=(const ContractionScalar& o);
  friend ContractionScalar operator+(ContractionScalar a, const ContractionScalar& b) { return a += b; }
  friend ContractionScalar operator-(ContractionScalar a, const ContractionScalar& b) { return a -= b; }
  friend ContractionScalar operator*(const ContractionScalar& a, const ContractionScalar& b);
  friend bool operator==(const ContractionScalar& a, const ContractionScalar& b) {
    return a.coeffs_ == b.coeffs_;
  }

  ContractionScalar conj() const;
  /// Cancels one factor of j. Throws DivisionUndefined when the j^0
  /// coefficient is nonzero.
  ContractionScalar div_j() const;
  ContractionScalar times_j(int power = 1) const;

  /// One: j -> 1. Nilpotent: drop degrees >= 2. Throws for Numeric.
  ContractionScalar reduce(const JMode& mode) const;
  std::complex<double> evaluate(double j) const;

 private:
  void add_term(int degree, const ComplexRational& c);
  std::map<int, ComplexRational> coeffs_;
};

std::string to_string(const ContractionScalar& x);

using ReducedScalar = std::variant<ContractionScalar, std::complex<double>>;

/// Mode-dependent value: exact scalar for One/Nilpotent, complex float for
/// Numeric(eps).
ReducedScalar reduce(const ContractionScalar& x, const JMode& mode);

inline ContractionScalar conjugate(const ContractionScalar& x) { return x.conj(); }

}  // namespace cew
