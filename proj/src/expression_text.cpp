#include <cctype>
#include <string>

#include "cew/errors.hpp"
#include "cew/field_algebra.hpp"

namespace cew {

namespace {

void append_power(std::string& out, const char* symbol, int power) {
  if (power == 0) return;
  if (!out.empty()) out += ' ';
  out += symbol;
  if (power > 1) out += "^" + std::to_string(power);
}

std::string index_list(const std::vector<std::string>& indices) {
  std::string out = "[";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ",";
    out += indices[i];
  }
  return out + "]";
}

std::string factor_text(const Factor& f) {
  std::string out;
  for (const auto& d : f.derivs) out += "d[" + d + "] ";
  std::string body = field_info(f.field).name;
  if (!f.indices.empty()) body += index_list(f.indices);
  out += f.conj ? "conj(" + body + ")" : body;
  return out;
}

// Returns the body of a term (without sign) and whether it is negative.
std::string term_text(const Term& t, bool& negative) {
  const ComplexRational& c = t.coeff;
  std::string rest;
  append_power(rest, "j", t.jdeg);
  append_power(rest, "g", t.params.g);
  append_power(rest, "gp", t.params.gp);
  append_power(rest, "R", t.params.R);
  for (const auto& f : t.factors) {
    if (!rest.empty()) rest += ' ';
    rest += factor_text(f);
  }
  std::string coeff;
  negative = false;
  if (c.is_real()) {
    negative = sgn(c.re()) < 0;
    Rational mag = abs(c.re());
    if (mag != 1 || rest.empty()) coeff = to_string(mag);
  } else if (sgn(c.re()) == 0) {
    negative = sgn(c.im()) < 0;
    Rational mag = abs(c.im());
    coeff = mag == 1 ? "i" : to_string(mag) + " i";
  } else {
    coeff = "(" + to_string(c.re()) + (sgn(c.im()) < 0 ? " - " : " + ") + to_string(abs(c.im())) +
            " i)";
  }
  if (coeff.empty()) return rest;
  if (rest.empty()) return coeff;
  return coeff + " " + rest;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "empty input");
    Expression e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  Expression parse_sum() {
    Expression total;
    bool negate = false;
    if (peek('+') || peek('-')) negate = text_[pos_++] == '-';
    Expression first = parse_product();
    total = negate ? -first : first;
    while (peek('+') || peek('-')) {
      bool minus = text_[pos_++] == '-';
      Expression term = parse_product();
      if (minus) {
        total -= term;
      } else {
        total += term;
      }
    }
    return total;
  }

  bool at_factor_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '*';
  }

  // Index names written at the top level of one product may occur at most
  // twice; names inside parentheses only count through their free indices.
  using Uses = std::map<std::string, int>;

  Expression parse_product() {
    skip_space();
    std::size_t start = pos_;
    Uses uses;
    Expression product = parse_power(uses);
    while (at_factor_start()) {
      if (text_[pos_] == '*') ++pos_;
      product = product * parse_power(uses);
    }
    for (const auto& [name, count] : uses) {
      if (count > 2) {
        throw IndexError("index '" + name + "' used " + std::to_string(count) +
                         " times in the product at position " + std::to_string(start));
      }
    }
    return product;
  }

  Expression parse_power(Uses& uses) {
    Uses local;
    Expression base = parse_atom(local);
    int n = 1;
    Expression result = base;
    if (peek('^')) {
      ++pos_;
      skip_space();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError(pos_, "expected a non-negative integer exponent");
      n = std::stoi(std::string(text_.substr(start, pos_ - start)));
      result = Expression(1L);
      for (int k = 0; k < n; ++k) result = result * base;
    }
    for (const auto& [name, count] : local) uses[name] += count * n;
    return result;
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      throw SyntaxError(pos_, "expected an identifier");
    }
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<std::string> indices() {
    std::vector<std::string> out;
    expect('[');
    out.push_back(identifier());
    while (peek(',')) {
      ++pos_;
      out.push_back(identifier());
    }
    expect(']');
    return out;
  }

  Expression number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ > s;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (!digits()) throw SyntaxError(pos_, "expected digits after '.'");
    }
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (!digits()) throw SyntaxError(pos_, "expected a denominator");
    }
    std::string_view lit = text_.substr(start, pos_ - start);
    Rational q;
    try {
      q = parse_rational(lit);
    } catch (const std::exception& e) {
      throw SyntaxError(start, e.what());
    }
    return Expression(ComplexRational(q));
  }

  Expression parse_atom(Uses& uses) {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '(') {
      ++pos_;
      Expression inner = parse_sum();
      expect(')');
      for (const auto& name : inner.free_indices()) ++uses[name];
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw SyntaxError(pos_, "unexpected '" + std::string(1, c) + "'");
    }
    std::size_t start = pos_;
    std::string name = identifier();
    // Trailing sign belongs to the name only when that spells a field.
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      std::string signed_name = name + text_[pos_];
      for (const auto& info : declared_fields()) {
        if (info.name == signed_name) {
          name = signed_name;
          ++pos_;
          break;
        }
      }
    }
    if (name == "i") return Expression(ComplexRational::i());
    if (name == "j") return Expression::j();
    if (name == "g") return Expression::param({1, 0, 0});
    if (name == "gp") return Expression::param({0, 1, 0});
    if (name == "R") return Expression::param({0, 0, 1});
    if (name == "d" && peek('[')) {
      auto idx = indices();
      if (idx.size() != 1) throw SyntaxError(start, "derivative takes one index");
      ++uses[idx.front()];
      Expression operand = parse_atom(uses);
      return derive(operand, idx.front());
    }
    if (name == "conj") {
      expect('(');
      Expression inner = parse_sum();
      expect(')');
      for (const auto& name : inner.free_indices()) ++uses[name];
      return conjugate(inner);
    }
    int id = 0;
    try {
      id = field_id(name);
    } catch (const UnknownField&) {
      throw SyntaxError(start, "unknown field '" + name + "'");
    }
    std::vector<std::string> idx;
    if (peek('[')) idx = indices();
    if (static_cast<int>(idx.size()) != field_info(id).arity) {
      throw ArityError("field '" + name + "' at position " + std::to_string(start) + " takes " +
                       std::to_string(field_info(id).arity) + " index(es)");
    }
    for (const auto& name : idx) ++uses[name];
    return Expression::field(name, std::move(idx));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Expression::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    bool negative = false;
    std::string body = term_text(terms_[k], negative);
    if (k == 0) {
      out = (negative ? "-" : "") + body;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
  }
  return out;
}

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace cew
