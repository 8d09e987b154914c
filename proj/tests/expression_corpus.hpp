#pragma once

// Random canonical expressions for property tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cew/field_algebra.hpp"

namespace corpus {

inline cew::Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 6);
  cew::Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline cew::Term random_term(std::mt19937_64& rng, const std::vector<std::string>& free) {
  const auto& fields = cew::declared_fields();
  std::uniform_int_distribution<int> pick_field(0, static_cast<int>(fields.size()) - 1);
  std::uniform_int_distribution<int> nfactors(0, 4);
  std::uniform_int_distribution<int> nderiv(0, 2);
  std::uniform_int_distribution<int> small(0, 2);
  std::bernoulli_distribution coin(0.5);

  cew::Term t;
  t.coeff = cew::ComplexRational(small_rational(rng), coin(rng) ? small_rational(rng) : 0);
  if (t.coeff.is_zero()) t.coeff = 1;
  t.jdeg = small(rng) * (coin(rng) ? 2 : 1);
  t.params = {small(rng), small(rng), small(rng)};
  int n = nfactors(rng);
  std::vector<std::pair<int, bool>> slots;  // (factor, is_index)
  for (int k = 0; k < n; ++k) {
    cew::Factor f;
    f.field = pick_field(rng);
    const auto& info = cew::field_info(f.field);
    f.conj = info.complex && info.partner.empty() && coin(rng);
    t.factors.push_back(f);
    for (int a = 0; a < info.arity; ++a) slots.emplace_back(k, true);
    int d = nderiv(rng);
    for (int a = 0; a < d; ++a) slots.emplace_back(k, false);
  }
  auto add_deriv_slot = [&] {
    if (t.factors.empty()) {
      cew::Factor f;
      f.field = cew::field_id("rho");
      t.factors.push_back(f);
    }
    slots.emplace_back(static_cast<int>(t.factors.size()) - 1, false);
  };
  while (slots.size() < free.size() || (slots.size() - free.size()) % 2 != 0) add_deriv_slot();
  std::vector<std::string> labels = free;
  static const std::vector<std::string> dummies = {"al", "be", "ga", "de", "ka", "la", "si", "ta",
                                                   "x1", "x2", "x3", "x4"};
  for (std::size_t k = 0; (slots.size() - free.size()) / 2 > k; ++k) {
    labels.push_back(dummies[k]);
    labels.push_back(dummies[k]);
  }
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    auto& f = t.factors[static_cast<std::size_t>(slots[s].first)];
    if (slots[s].second) {
      f.indices.push_back(labels[s]);
    } else {
      f.derivs.push_back(labels[s]);
    }
  }
  return t;
}

/// A normalized random expression with free indices drawn from {mu, nu}.
inline cew::Expression random_expression(std::mt19937_64& rng, int max_terms = 4) {
  std::uniform_int_distribution<int> nfree(0, 2);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::vector<std::string> free;
  int k = nfree(rng);
  if (k >= 1) free.push_back("mu");
  if (k >= 2) free.push_back("nu");
  std::vector<cew::Term> terms;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) terms.push_back(random_term(rng, free));
  return cew::Expression(std::move(terms));
}

}  // namespace corpus
