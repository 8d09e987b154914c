#include <algorithm>
#include <set>
#include <stdexcept>

#include "cew/errors.hpp"
#include "cew/field_algebra.hpp"
#include "field_algebra_internal.hpp"

namespace cew {

namespace detail {

std::vector<Term> derive_term(const Term& t, const std::string& idx) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < t.factors.size(); ++k) {
    Term copy = t;
    auto& derivs = copy.factors[k].derivs;
    derivs.push_back(idx);
    std::sort(derivs.begin(), derivs.end());
    out.push_back(std::move(copy));
  }
  return out;
}

Term conjugate_term(const Term& t) {
  Term out = t;
  out.coeff = t.coeff.conj();
  for (auto& f : out.factors) {
    const FieldInfo& info = field_info(f.field);
    if (!info.complex) continue;
    if (!info.partner.empty()) {
      f.field = field_id(info.partner);
    } else {
      f.conj = !f.conj;
    }
  }
  return out;
}

}  // namespace detail

namespace {

// Products of term lists; index names must already be disjoint.
std::vector<Term> multiply_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      Term t;
      t.coeff = x.coeff * y.coeff;
      t.jdeg = x.jdeg + y.jdeg;
      t.params = x.params;
      t.params += y.params;
      t.factors = x.factors;
      t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Replacement terms for one factor occurrence: dummies made unique, the hole
// bound to the factor's index, derivatives and conjugation applied.
std::vector<Term> expand_factor(const Factor& f, const Replacement& rule, bool conj_rule,
                                const std::string& prefix) {
  const FieldInfo& info = field_info(f.field);
  if (info.arity == 1 && rule.hole.empty()) {
    throw ArityError("replacement for vector field '" + info.name + "' has no hole index");
  }
  if (info.arity == 0 && !rule.hole.empty()) {
    throw ArityError("replacement for scalar field '" + info.name + "' has a hole index");
  }
  std::set<std::string> expected;
  if (!rule.hole.empty()) expected.insert(rule.hole);
  if (!rule.expr.is_zero() && rule.expr.free_indices() != expected) {
    throw ArityError("replacement for '" + info.name + "' has the wrong free indices");
  }
  std::vector<Term> terms;
  for (const auto& t : rule.expr.terms()) {
    Term copy = detail::with_fresh_dummies(t, prefix);
    if (!rule.hole.empty()) detail::rename_indices(copy, {{rule.hole, f.indices.front()}});
    if (conj_rule != f.conj) copy = detail::conjugate_term(copy);
    terms.push_back(std::move(copy));
  }
  for (const auto& d : f.derivs) {
    std::vector<Term> next;
    for (const auto& t : terms) {
      auto parts = detail::derive_term(t, d);
      next.insert(next.end(), parts.begin(), parts.end());
    }
    terms = std::move(next);
  }
  return terms;
}

// Rule for a factor, if any: direct, or conjugated from the partner's rule.
const Replacement* find_rule(const SubstitutionRules& rules, const Factor& f, bool& conj_rule) {
  const FieldInfo& info = field_info(f.field);
  if (auto it = rules.find(info.name); it != rules.end()) {
    conj_rule = false;
    return &it->second;
  }
  if (!info.partner.empty()) {
    if (auto it = rules.find(info.partner); it != rules.end()) {
      conj_rule = true;
      return &it->second;
    }
  }
  return nullptr;
}

Term bare(const Term& t) {
  Term out = t;
  out.factors.clear();
  return out;
}

}  // namespace

Expression derive(const Expression& e, const std::string& idx) {
  std::vector<Term> out;
  for (const auto& t : e.terms()) {
    Term fresh = detail::with_fresh_dummies(t, "#d");
    auto parts = detail::derive_term(fresh, idx);
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return Expression(std::move(out));
}

Replacement j_scaling(const std::string& field, int power) {
  const FieldInfo& info = field_info(field_id(field));
  Replacement r;
  if (info.arity == 1) {
    r.hole = "h";
    r.expr = Expression::j(power) * Expression::field(field, {"h"});
  } else {
    r.expr = Expression::j(power) * Expression::field(field);
  }
  return r;
}

Expression substitute(const Expression& e, const SubstitutionRules& rules) {
  for (const auto& [name, rule] : rules) field_id(name);
  std::vector<Term> out;
  int occurrence = 0;
  for (const auto& t : e.terms()) {
    std::vector<Term> partial = {bare(t)};
    for (const auto& f : t.factors) {
      bool conj_rule = false;
      const Replacement* rule = find_rule(rules, f, conj_rule);
      std::vector<Term> expansion;
      if (rule) {
        expansion = expand_factor(f, *rule, conj_rule, "#u" + std::to_string(occurrence++) + "_");
      } else {
        expansion.push_back(detail::single_factor_term(f));
      }
      partial = multiply_terms(partial, expansion);
      if (partial.empty()) break;
    }
    out.insert(out.end(), partial.begin(), partial.end());
  }
  return Expression(std::move(out));
}

Expression vary(const Expression& e, const SubstitutionRules& variations) {
  for (const auto& [name, rule] : variations) field_id(name);
  std::vector<Term> out;
  int occurrence = 0;
  for (const auto& t : e.terms()) {
    for (std::size_t k = 0; k < t.factors.size(); ++k) {
      bool conj_rule = false;
      const Replacement* rule = find_rule(variations, t.factors[k], conj_rule);
      if (!rule) continue;
      Term rest = t;
      rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(k));
      auto expansion = expand_factor(t.factors[k], *rule, conj_rule,
                                     "#v" + std::to_string(occurrence++) + "_");
      auto products = multiply_terms({rest}, expansion);
      out.insert(out.end(), products.begin(), products.end());
    }
  }
  return Expression(std::move(out));
}

Expression euler_lagrange(const Expression& lagrangian, const std::string& field,
                          const std::string& idx) {
  const int id = field_id(field);
  const bool vector = field_info(id).arity == 1;
  if (!lagrangian.free_indices().empty()) {
    throw IndexError("Euler-Lagrange operator needs a scalar Lagrangian");
  }
  const std::string slot = "#n";
  std::vector<Term> plain;
  std::vector<Term> momentum;  // carries the free derivative slot "#n"
  std::vector<Term> delta;     // d/d(d_a X_a) terms: delta_{n idx}, derivative index is idx
  for (const auto& original : lagrangian.terms()) {
    Term t = detail::with_fresh_dummies(original, "#e");
    for (std::size_t k = 0; k < t.factors.size(); ++k) {
      const Factor& f = t.factors[k];
      if (f.field != id || f.conj) continue;
      if (f.derivs.size() > 1) {
        throw std::invalid_argument("Euler-Lagrange operator supports first derivatives only");
      }
      Term rest = t;
      rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(k));
      std::map<std::string, std::string> mapping;
      if (vector) mapping[f.indices.front()] = idx;
      if (f.derivs.empty()) {
        detail::rename_indices(rest, mapping);
        plain.push_back(std::move(rest));
        continue;
      }
      const std::string& n = f.derivs.front();
      if (vector && n == f.indices.front()) {
        delta.push_back(std::move(rest));
        continue;
      }
      mapping[n] = slot;
      detail::rename_indices(rest, mapping);
      momentum.push_back(std::move(rest));
    }
  }
  std::vector<Term> out = std::move(plain);
  auto subtract_derivative = [&](const std::vector<Term>& terms, const std::string& d) {
    for (const auto& t : terms) {
      for (auto& part : detail::derive_term(t, d)) {
        part.coeff = -part.coeff;
        out.push_back(std::move(part));
      }
    }
  };
  subtract_derivative(momentum, slot);
  subtract_derivative(delta, idx);
  return Expression(std::move(out));
}

}  // namespace cew
