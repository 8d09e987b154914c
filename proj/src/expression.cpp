#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cew/errors.hpp"
#include "cew/field_algebra.hpp"
#include "field_algebra_internal.hpp"

namespace cew {

const std::vector<FieldInfo>& declared_fields() {
  static const std::vector<FieldInfo> fields = {
      {"A1", 1, false, ""},    {"A2", 1, false, ""},    {"A3", 1, false, ""},
      {"B", 1, false, ""},     {"W1", 1, false, ""},    {"W2", 1, false, ""},
      {"W3", 1, false, ""},    {"W+", 1, true, "W-"},   {"W-", 1, true, "W+"},
      {"Z", 1, false, ""},     {"Aem", 1, false, ""},   {"rho", 0, false, ""},
      {"phi1", 0, true, ""},   {"phi2", 0, true, ""},   {"omega", 0, false, ""},
      {"eps1", 0, false, ""},  {"eps2", 0, false, ""},  {"eps3", 0, false, ""},
  };
  return fields;
}

int field_id(std::string_view name) {
  const auto& fields = declared_fields();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == name) return static_cast<int>(i);
  }
  throw UnknownField("unknown field '" + std::string(name) + "'");
}

const FieldInfo& field_info(int id) { return declared_fields().at(static_cast<std::size_t>(id)); }

namespace detail {

std::map<std::string, int> index_counts(const Term& t) {
  std::map<std::string, int> counts;
  for (const auto& f : t.factors) {
    for (const auto& i : f.indices) ++counts[i];
    for (const auto& d : f.derivs) ++counts[d];
  }
  return counts;
}

std::vector<std::string> summed_indices(const Term& t) {
  auto counts = index_counts(t);
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto visit = [&](const std::string& name) {
    if (counts[name] == 2 && seen.insert(name).second) out.push_back(name);
  };
  for (const auto& f : t.factors) {
    for (const auto& d : f.derivs) visit(d);
    for (const auto& i : f.indices) visit(i);
  }
  return out;
}

std::vector<std::string> free_indices(const Term& t) {
  std::vector<std::string> out;
  for (const auto& [name, count] : index_counts(t)) {
    if (count == 1) out.push_back(name);
  }
  return out;
}

void rename_indices(Term& t, const std::map<std::string, std::string>& mapping) {
  auto rename = [&](std::string& s) {
    if (auto it = mapping.find(s); it != mapping.end()) s = it->second;
  };
  for (auto& f : t.factors) {
    for (auto& i : f.indices) rename(i);
    for (auto& d : f.derivs) rename(d);
    std::sort(f.derivs.begin(), f.derivs.end());
  }
}

Term with_fresh_dummies(const Term& t, const std::string& prefix) {
  Term out = t;
  std::map<std::string, std::string> mapping;
  int n = 0;
  for (const auto& d : summed_indices(t)) mapping[d] = prefix + std::to_string(n++);
  rename_indices(out, mapping);
  return out;
}

std::string factor_key(const Factor& f) {
  char id[8];
  std::snprintf(id, sizeof id, "%02d", f.field);
  std::string key = id;
  key += f.conj ? "*" : "";
  key += "(";
  for (const auto& d : f.derivs) key += d + ",";
  key += ")[";
  for (const auto& i : f.indices) key += i + ",";
  key += "]";
  return key;
}

std::string term_key(const Term& t) {
  char head[64];
  std::snprintf(head, sizeof head, "%03d|%03d,%03d,%03d|", t.jdeg, t.params.g, t.params.gp,
                t.params.R);
  std::string key = head;
  for (const auto& f : t.factors) key += factor_key(f) + ";";
  return key;
}

Term single_factor_term(const Factor& f) {
  Term t;
  t.factors.push_back(f);
  return t;
}

}  // namespace detail

namespace {

using detail::ExpressionAccess;

const std::vector<std::string>& dummy_pool() {
  static const std::vector<std::string> pool = [] {
    std::vector<std::string> p = {"mu", "nu", "la", "ka", "al", "be", "ga", "de", "si", "ta"};
    for (int i = 0; i < 40; ++i) p.push_back("x" + std::to_string(i));
    return p;
  }();
  return pool;
}

constexpr std::size_t kMaxExhaustiveDummies = 6;

// Normalises conjugation flags and validates arity.
void normalize_factor(Factor& f) {
  const FieldInfo& info = field_info(f.field);
  if (static_cast<int>(f.indices.size()) != info.arity) {
    throw ArityError("field '" + info.name + "' takes " + std::to_string(info.arity) +
                     " index(es), got " + std::to_string(f.indices.size()));
  }
  if (f.conj) {
    if (!info.complex) {
      f.conj = false;
    } else if (!info.partner.empty()) {
      f.field = field_id(info.partner);
      f.conj = false;
    }
  }
  std::sort(f.derivs.begin(), f.derivs.end());
}

struct Labelled {
  std::string key;
  std::vector<Factor> factors;
};

Labelled label_with(const Term& t, const std::vector<std::string>& dummies,
                    const std::vector<std::string>& names) {
  Term copy = t;
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 0; i < dummies.size(); ++i) mapping[dummies[i]] = names[i];
  detail::rename_indices(copy, mapping);
  std::vector<std::pair<std::string, Factor>> keyed;
  keyed.reserve(copy.factors.size());
  for (auto& f : copy.factors) keyed.emplace_back(detail::factor_key(f), std::move(f));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Labelled out;
  for (auto& [k, f] : keyed) {
    out.key += k + ";";
    out.factors.push_back(std::move(f));
  }
  return out;
}

// Brings one term into canonical form. Returns false if the heuristic
// labelling was used.
bool canonicalize_term(Term& t) {
  for (auto& f : t.factors) normalize_factor(f);
  auto counts = detail::index_counts(t);
  for (const auto& [name, count] : counts) {
    if (count > 2) {
      throw IndexError("index '" + name + "' used " + std::to_string(count) + " times in one term");
    }
  }
  std::set<std::string> free;
  for (const auto& [name, count] : counts) {
    if (count == 1) free.insert(name);
  }
  // Temporarily move summed indices out of the way of the pool names.
  Term staged = detail::with_fresh_dummies(t, "#s");
  std::vector<std::string> dummies = detail::summed_indices(staged);
  std::vector<std::string> names;
  for (const auto& p : dummy_pool()) {
    if (names.size() == dummies.size()) break;
    if (free.count(p) == 0) names.push_back(p);
  }
  if (names.size() < dummies.size()) throw IndexError("too many summed indices in one term");

  if (dummies.size() <= kMaxExhaustiveDummies) {
    std::vector<std::size_t> perm(dummies.size());
    std::iota(perm.begin(), perm.end(), 0);
    Labelled best;
    bool first = true;
    do {
      std::vector<std::string> assigned(dummies.size());
      for (std::size_t i = 0; i < perm.size(); ++i) assigned[i] = names[perm[i]];
      Labelled candidate = label_with(staged, dummies, assigned);
      if (first || candidate.key < best.key) {
        best = std::move(candidate);
        first = false;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    t.factors = std::move(best.factors);
    return true;
  }
  // Heuristic: order factors by structure with summed names masked, then
  // label by first occurrence.
  std::set<std::string> dummy_set(dummies.begin(), dummies.end());
  auto masked = [&](const Factor& f) {
    Factor m = f;
    for (auto& i : m.indices) {
      if (dummy_set.count(i)) i = "?";
    }
    for (auto& d : m.derivs) {
      if (dummy_set.count(d)) d = "?";
    }
    std::sort(m.derivs.begin(), m.derivs.end());
    return detail::factor_key(m);
  };
  std::stable_sort(staged.factors.begin(), staged.factors.end(),
                   [&](const Factor& a, const Factor& b) { return masked(a) < masked(b); });
  std::vector<std::string> order = detail::summed_indices(staged);
  t.factors = label_with(staged, order, names).factors;
  return false;
}

}  // namespace

namespace detail {

Expression normalize_terms(std::vector<Term> terms) {
  bool complete = true;
  std::map<std::string, Term> merged;
  std::vector<std::string> free_ref;
  bool have_free = false;
  for (auto& t : terms) {
    if (t.coeff.is_zero()) continue;
    if (t.jdeg < 0) throw std::invalid_argument("negative j-degree in term");
    if (t.params.g < 0 || t.params.gp < 0 || t.params.R < 0) {
      throw ParameterError("negative parameter exponent in term");
    }
    complete = canonicalize_term(t) && complete;
    auto free = detail::free_indices(t);
    if (!have_free) {
      free_ref = free;
      have_free = true;
    } else if (free != free_ref) {
      throw IndexError("terms of a sum carry different free indices");
    }
    std::string key = term_key(t);
    auto [it, inserted] = merged.try_emplace(key, std::move(t));
    if (!inserted) it->second.coeff += t.coeff;
  }
  std::vector<Term> out;
  out.reserve(merged.size());
  for (auto& [key, t] : merged) {
    if (!t.coeff.is_zero()) out.push_back(std::move(t));
  }
  return ExpressionAccess::from_canonical(std::move(out), complete);
}

}  // namespace detail

Expression::Expression(long v) : Expression(ComplexRational(v)) {}

Expression::Expression(const ComplexRational& c) {
  if (!c.is_zero()) {
    Term t;
    t.coeff = c;
    terms_.push_back(std::move(t));
  }
}

Expression::Expression(std::vector<Term> terms) {
  *this = detail::normalize_terms(std::move(terms));
}

Expression Expression::constant(const ComplexRational& c, int jdeg, ParamMonomial params) {
  Term t;
  t.coeff = c;
  t.jdeg = jdeg;
  t.params = params;
  return Expression(std::vector<Term>{t});
}

Expression Expression::field(std::string_view name, std::vector<std::string> indices,
                             std::vector<std::string> derivs, bool conj) {
  Factor f;
  f.field = field_id(name);
  f.indices = std::move(indices);
  f.derivs = std::move(derivs);
  f.conj = conj;
  return Expression(std::vector<Term>{detail::single_factor_term(f)});
}

std::set<std::string> Expression::free_indices() const {
  if (terms_.empty()) return {};
  auto f = detail::free_indices(terms_.front());
  return {f.begin(), f.end()};
}

Expression Expression::operator-() const {
  Expression out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

namespace {

Expression merge(const Expression& a, const Expression& b, bool subtract) {
  if (!a.is_zero() && !b.is_zero() && a.free_indices() != b.free_indices()) {
    throw IndexError("cannot add expressions with different free indices");
  }
  std::vector<Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  auto push_b = [&](const Term& t) {
    Term copy = t;
    if (subtract) copy.coeff = -copy.coeff;
    out.push_back(std::move(copy));
  };
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end()) {
      out.push_back(*ia++);
      continue;
    }
    if (ia == a.terms().end()) {
      push_b(*ib++);
      continue;
    }
    std::string ka = detail::term_key(*ia);
    std::string kb = detail::term_key(*ib);
    if (ka < kb) {
      out.push_back(*ia++);
    } else if (kb < ka) {
      push_b(*ib++);
    } else {
      Term t = *ia++;
      if (subtract) {
        t.coeff -= ib->coeff;
      } else {
        t.coeff += ib->coeff;
      }
      ++ib;
      if (!t.coeff.is_zero()) out.push_back(std::move(t));
    }
  }
  return detail::ExpressionAccess::from_canonical(
      std::move(out), a.relabeling_complete() && b.relabeling_complete());
}

}  // namespace

Expression& Expression::operator+=(const Expression& o) {
  *this = merge(*this, o, false);
  return *this;
}

Expression& Expression::operator-=(const Expression& o) {
  *this = merge(*this, o, true);
  return *this;
}

Expression operator*(const Expression& a, const Expression& b) {
  std::vector<Term> products;
  products.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    Term left = detail::with_fresh_dummies(ta, "#a");
    for (const auto& tb : b.terms()) {
      Term right = detail::with_fresh_dummies(tb, "#b");
      Term t;
      t.coeff = left.coeff * right.coeff;
      t.jdeg = left.jdeg + right.jdeg;
      t.params = left.params;
      t.params += right.params;
      t.factors = left.factors;
      t.factors.insert(t.factors.end(), right.factors.begin(), right.factors.end());
      products.push_back(std::move(t));
    }
  }
  Expression out(std::move(products));
  if (!a.relabeling_complete() || !b.relabeling_complete()) {
    detail::ExpressionAccess::complete(out) = false;
  }
  return out;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const Term& x = a.terms_[i];
    const Term& y = b.terms_[i];
    if (!(x.coeff == y.coeff) || x.jdeg != y.jdeg || x.params != y.params ||
        x.factors != y.factors) {
      return false;
    }
  }
  return true;
}

Expression conjugate(const Expression& e) {
  std::vector<Term> terms = e.terms();
  for (auto& t : terms) {
    t.coeff = t.coeff.conj();
    for (auto& f : t.factors) {
      const FieldInfo& info = field_info(f.field);
      if (!info.complex) continue;
      if (!info.partner.empty()) {
        f.field = field_id(info.partner);
      } else {
        f.conj = !f.conj;
      }
    }
  }
  return Expression(std::move(terms));
}

Expression scale(const Expression& e, const ComplexRational& c) {
  if (c.is_zero()) return {};
  std::vector<Term> terms = e.terms();
  for (auto& t : terms) t.coeff *= c;
  return detail::ExpressionAccess::from_canonical(std::move(terms), e.relabeling_complete());
}

Expression divide(const Expression& e, const ParamMonomial& p) {
  std::vector<Term> terms = e.terms();
  for (auto& t : terms) {
    t.params.g -= p.g;
    t.params.gp -= p.gp;
    t.params.R -= p.R;
    if (t.params.g < 0 || t.params.gp < 0 || t.params.R < 0) {
      throw ParameterError("term not divisible by the parameter monomial");
    }
  }
  return Expression(std::move(terms));
}

Expression divide_j(const Expression& e) {
  std::vector<Term> terms = e.terms();
  for (auto& t : terms) {
    if (t.jdeg == 0) throw DivisionUndefined("term with j-degree 0 cannot be divided by j");
    --t.jdeg;
  }
  return Expression(std::move(terms));
}

Expression rename_index(const Expression& e, const std::string& from, const std::string& to) {
  std::vector<Term> terms;
  terms.reserve(e.terms().size());
  for (const auto& t : e.terms()) {
    Term copy = detail::with_fresh_dummies(t, "#r");
    detail::rename_indices(copy, {{from, to}});
    terms.push_back(std::move(copy));
  }
  return Expression(std::move(terms));
}

std::map<int, Expression> j_decompose(const Expression& e) {
  std::map<int, std::vector<Term>> parts;
  for (const auto& t : e.terms()) {
    Term copy = t;
    copy.jdeg = 0;
    parts[t.jdeg].push_back(std::move(copy));
  }
  std::map<int, Expression> out;
  for (auto& [d, terms] : parts) out.emplace(d, Expression(std::move(terms)));
  return out;
}

Expression reduce(const Expression& e, const JMode& mode) {
  std::vector<Term> terms;
  for (const auto& t : e.terms()) {
    switch (mode.kind()) {
      case JMode::Kind::One: {
        Term copy = t;
        copy.jdeg = 0;
        terms.push_back(std::move(copy));
        break;
      }
      case JMode::Kind::Nilpotent:
        if (t.jdeg < 2) terms.push_back(t);
        break;
      case JMode::Kind::Numeric:
        throw std::invalid_argument("exact expression reduction requested in numeric mode");
    }
  }
  return Expression(std::move(terms));
}

Expression instantiate(const Expression& e, const ParamValues& values) {
  std::vector<Term> terms = e.terms();
  for (auto& t : terms) {
    Rational factor = 1;
    for (int k = 0; k < t.params.g; ++k) factor *= values.g;
    for (int k = 0; k < t.params.gp; ++k) factor *= values.gp;
    for (int k = 0; k < t.params.R; ++k) factor *= values.R;
    t.coeff *= ComplexRational(factor);
    t.params = {};
  }
  return Expression(std::move(terms));
}

ComplexRational coefficient_of(const Expression& e, const Expression& monomial) {
  if (monomial.terms().size() != 1) {
    throw std::invalid_argument("coefficient_of needs a single-term monomial");
  }
  std::string key = detail::term_key(monomial.terms().front());
  for (const auto& t : e.terms()) {
    if (detail::term_key(t) == key) return t.coeff;
  }
  return {};
}

std::set<std::string> field_symbols(const Expression& e) {
  std::set<std::string> out;
  for (const auto& t : e.terms()) {
    for (const auto& f : t.factors) out.insert(field_info(f.field).name);
  }
  return out;
}

}  // namespace cew
