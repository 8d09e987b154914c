#pragma once

#include <map>
#include <string>
#include <vector>

#include "cew/field_algebra.hpp"

namespace cew::detail {

/// Occurrences of every index name in a term (indices and derivatives).
std::map<std::string, int> index_counts(const Term& t);
/// Summed index names in order of first occurrence.
std::vector<std::string> summed_indices(const Term& t);
std::vector<std::string> free_indices(const Term& t);
void rename_indices(Term& t, const std::map<std::string, std::string>& mapping);
/// Renames summed indices to prefix0, prefix1, ...
Term with_fresh_dummies(const Term& t, const std::string& prefix);

/// Serialisation of an already canonical term (no relabelling search).
std::string term_key(const Term& t);
/// Structure-only key (coefficient excluded).
std::string factor_key(const Factor& f);

/// Access to Expression internals for the algebra implementation files.
struct ExpressionAccess {
  /// Terms must be canonical, merged and sorted by term_key.
  static Expression from_canonical(std::vector<Term> terms, bool complete) {
    Expression e;
    e.terms_ = std::move(terms);
    e.relabeling_complete_ = complete;
    return e;
  }
  static bool& complete(Expression& e) { return e.relabeling_complete_; }
};

Term single_factor_term(const Factor& f);
/// Leibniz rule on one term; no relabelling.
std::vector<Term> derive_term(const Term& t, const std::string& idx);
Term conjugate_term(const Term& t);
/// Canonicalises and merges raw terms.
Expression normalize_terms(std::vector<Term> terms);

}  // namespace cew::detail
