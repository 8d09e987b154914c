#pragma once

// Polynomial algebra over classical field symbols.
//
// A Term is coeff * j^jdeg * g^a gp^b R^c * (product of field factors).
// Every factor carries abstract Lorentz indices and a multiset of outer
// derivative indices. An index name occurs once in a term (free) or twice
// (summed over four values). Expressions are kept in canonical form:
// factors sorted, summed indices relabelled to the lexicographically
// smallest labelling, like terms merged and zero terms dropped.

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cew/contraction_ring.hpp"
#include "cew/report.hpp"

namespace cew {

namespace detail {
struct ExpressionAccess;
}

struct FieldInfo {
  std::string name;
  int arity = 0;
  bool complex = false;
  /// Conjugate partner stored as its own symbol (W+ <-> W-); empty if none.
  std::string partner;
};

/// The declared field symbols, in canonical factor order.
const std::vector<FieldInfo>& declared_fields();
/// Throws UnknownField.
int field_id(std::string_view name);
const FieldInfo& field_info(int id);

struct ParamMonomial {
  int g = 0;
  int gp = 0;
  int R = 0;
  auto operator<=>(const ParamMonomial&) const = default;
  ParamMonomial& operator+=(const ParamMonomial& o) {
    g += o.g;
    gp += o.gp;
    R += o.R;
    return *this;
  }
};

struct Factor {
  int field = 0;
  bool conj = false;
  std::vector<std::string> indices;
  /// Sorted; derivatives commute.
  std::vector<std::string> derivs;
  bool operator==(const Factor&) const = default;
};

struct Term {
  ComplexRational coeff{1};
  int jdeg = 0;
  ParamMonomial params;
  std::vector<Factor> factors;
};

class Expression {
 public:
  Expression() = default;
  Expression(long v);                     // NOLINT
  Expression(const ComplexRational& c);   // NOLINT
  /// Builds and normalizes; throws IndexError / ArityError on rule violations.
  explicit Expression(std::vector<Term> terms);

  static Expression constant(const ComplexRational& c, int jdeg = 0, ParamMonomial params = {});
  static Expression j(int power = 1) { return constant(1, power); }
  static Expression param(ParamMonomial p) { return constant(1, 0, p); }
  static Expression field(std::string_view name, std::vector<std::string> indices = {},
                          std::vector<std::string> derivs = {}, bool conj = false);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// False when some term had too many summed indices for exhaustive
  /// relabelling and a heuristic labelling was used.
  bool relabeling_complete() const { return relabeling_complete_; }
  std::set<std::string> free_indices() const;

  Expression operator-() const;
  Expression& operator+=(const Expression& o);
  Expression& operator-=(const Expression& o);
  friend Expression operator+(Expression a, const Expression& b) { return a += b; }
  friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
  friend Expression operator*(const Expression& a, const Expression& b);
  friend bool operator==(const Expression& a, const Expression& b);

  std::string to_string() const;

 private:
  friend struct detail::ExpressionAccess;
  std::vector<Term> terms_;
  bool relabeling_complete_ = true;
};

inline std::string to_string(const Expression& e) { return e.to_string(); }

/// Complex conjugation; j and the parameters are real.
Expression conjugate(const Expression& e);

Expression parse(std::string_view text);

Expression scale(const Expression& e, const ComplexRational& c);
/// Divides every term by a parameter monomial; throws ParameterError if a
/// term is not divisible.
Expression divide(const Expression& e, const ParamMonomial& p);
/// Cancels one power of j from every term; throws DivisionUndefined.
Expression divide_j(const Expression& e);

/// Leibniz rule. Summed indices clashing with idx are relabelled first.
Expression derive(const Expression& e, const std::string& idx);
/// Renames a free index.
Expression rename_index(const Expression& e, const std::string& from, const std::string& to);

/// Replacement for a field symbol. `hole` is the free index of `expr` that
/// takes the place of the field's own index (empty for scalars).
struct Replacement {
  Expression expr;
  std::string hole;
};
using SubstitutionRules = std::map<std::string, Replacement>;

/// rule that maps X[hole] -> j^power X[hole]
Replacement j_scaling(const std::string& field, int power = 1);

/// Simultaneous substitution; derivative tags distribute over the
/// replacement. Conjugated factors receive the conjugated replacement.
Expression substitute(const Expression& e, const SubstitutionRules& rules);
/// First-order variation: sum over factor occurrences of the factor replaced
/// by its variation (with derivatives applied).
Expression vary(const Expression& e, const SubstitutionRules& variations);

/// Terms grouped by j-degree; each part has the j factor stripped.
std::map<int, Expression> j_decompose(const Expression& e);
/// One: j -> 1. Nilpotent: drop j-degree >= 2.
Expression reduce(const Expression& e, const JMode& mode);
/// Replaces the parameter monomials by exact values.
struct ParamValues {
  Rational g{1};
  Rational gp{1};
  Rational R{1};
};
Expression instantiate(const Expression& e, const ParamValues& values);

/// Coefficient of a single-term monomial (its own coefficient is ignored).
ComplexRational coefficient_of(const Expression& e, const Expression& monomial);
std::set<std::string> field_symbols(const Expression& e);

// ---- numeric evaluation ------------------------------------------------

struct Instance {
  int field = 0;
  bool conj = false;
  int index = -1;  // -1 for scalar fields
  std::vector<int> derivs;
  auto operator<=>(const Instance&) const = default;
};

class Assignment {
 public:
  virtual ~Assignment() = default;
  virtual std::complex<double> value(const Instance& inst) const = 0;
};

/// Explicit values. Conjugated instances and partner symbols (W- for W+)
/// fall back to the conjugate of the stored partner value.
class MapAssignment : public Assignment {
 public:
  void set(const Instance& inst, std::complex<double> v) { values_[inst] = v; }
  void set(std::string_view field, int index, std::complex<double> v,
           std::vector<int> derivs = {});
  std::complex<double> value(const Instance& inst) const override;

 private:
  std::map<Instance, std::complex<double>> values_;
};

/// Deterministic Gaussian values keyed by (seed, instance): real fields get
/// real values, complex fields complex ones, conjugates and partners are
/// conjugate to their counterpart.
class RandomAssignment : public Assignment {
 public:
  explicit RandomAssignment(std::uint64_t seed, double scale = 1.0) : seed_(seed), scale_(scale) {}
  std::complex<double> value(const Instance& inst) const override;

 private:
  std::uint64_t seed_;
  double scale_;
};

struct NumericParams {
  double g = 1.0;
  double gp = 1.0;
  double R = 1.0;
};

/// Sums paired indices over 0..3. Free indices must be bound in `free`.
std::complex<double> eval_numeric(const Expression& e, const Assignment& a,
                                  const NumericParams& params, double jvalue,
                                  const std::map<std::string, int>& free = {});

struct EqualityPolicy {
  /// Run the randomized oracle when the canonical difference is nonzero.
  bool numeric_fallback = false;
  int trials = 20;
  double tolerance = 1e-9;
  std::uint64_t seed = 1;
  NumericParams params;
};

struct EqualityResult {
  bool equal = false;
  DecisionPath path = DecisionPath::ExactSymbolic;
  /// Largest |a - b| / max(1, |a|, |b|) seen by the oracle.
  double max_rel_error = 0.0;
  std::string witness;
};

EqualityResult equals(const Expression& a, const Expression& b, const EqualityPolicy& policy = {});

/// dL/dX[idx] - d_nu (dL/d(d_nu X[idx])) for a scalar Lagrangian with at
/// most first derivatives of `field`. Conjugates are independent variables.
Expression euler_lagrange(const Expression& lagrangian, const std::string& field,
                          const std::string& idx = "nu");

}  // namespace cew
