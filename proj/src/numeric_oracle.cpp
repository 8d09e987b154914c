#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cew/errors.hpp"
#include "cew/field_algebra.hpp"
#include "field_algebra_internal.hpp"

namespace cew {

namespace {

std::string describe(const Instance& inst) {
  std::string out;
  for (int d : inst.derivs) out += "d[" + std::to_string(d) + "] ";
  out += field_info(inst.field).name;
  if (inst.index >= 0) out += "[" + std::to_string(inst.index) + "]";
  return inst.conj ? "conj(" + out + ")" : out;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

void MapAssignment::set(std::string_view field, int index, std::complex<double> v,
                        std::vector<int> derivs) {
  std::sort(derivs.begin(), derivs.end());
  values_[Instance{field_id(field), false, index, std::move(derivs)}] = v;
}

std::complex<double> MapAssignment::value(const Instance& inst) const {
  if (auto it = values_.find(inst); it != values_.end()) return it->second;
  const FieldInfo& info = field_info(inst.field);
  Instance other = inst;
  if (inst.conj) {
    other.conj = false;
    if (auto it = values_.find(other); it != values_.end()) return std::conj(it->second);
  } else if (!info.partner.empty()) {
    other.field = field_id(info.partner);
    if (auto it = values_.find(other); it != values_.end()) return std::conj(it->second);
  } else if (!info.complex) {
    other.conj = true;
    if (auto it = values_.find(other); it != values_.end()) return it->second;
  }
  throw MissingAssignment("no value for " + describe(inst));
}

std::complex<double> RandomAssignment::value(const Instance& inst) const {
  const FieldInfo& info = field_info(inst.field);
  int field = inst.field;
  bool conj = inst.conj;
  // W- is drawn as the conjugate of W+.
  if (!info.partner.empty() && info.name == "W-") {
    field = field_id(info.partner);
    conj = !conj;
  }
  std::uint64_t h = mix(seed_, static_cast<std::uint64_t>(field) + 1);
  h = mix(h, static_cast<std::uint64_t>(inst.index + 2));
  for (int d : inst.derivs) h = mix(h, static_cast<std::uint64_t>(d + 11));
  h = mix(h, inst.derivs.size());
  std::mt19937_64 rng(h);
  std::normal_distribution<double> normal(0.0, scale_);
  std::complex<double> v(normal(rng), 0.0);
  if (field_info(field).complex) v.imag(normal(rng));
  return conj ? std::conj(v) : v;
}

std::complex<double> eval_numeric(const Expression& e, const Assignment& a,
                                  const NumericParams& params, double jvalue,
                                  const std::map<std::string, int>& free) {
  std::map<Instance, std::complex<double>> cache;
  auto lookup = [&](const Instance& inst) {
    auto it = cache.find(inst);
    if (it != cache.end()) return it->second;
    std::complex<double> v = a.value(inst);
    cache.emplace(inst, v);
    return v;
  };
  std::complex<double> total = 0.0;
  for (const auto& t : e.terms()) {
    std::complex<double> scale = t.coeff.to_complex() * std::pow(jvalue, t.jdeg) *
                                 std::pow(params.g, t.params.g) *
                                 std::pow(params.gp, t.params.gp) * std::pow(params.R, t.params.R);
    std::map<std::string, int> binding;
    for (const auto& name : detail::free_indices(t)) {
      auto it = free.find(name);
      if (it == free.end()) throw IndexError("free index '" + name + "' is not bound");
      binding[name] = it->second;
    }
    std::vector<std::string> summed = detail::summed_indices(t);
    std::vector<int> counter(summed.size(), 0);
    std::complex<double> sum = 0.0;
    while (true) {
      for (std::size_t k = 0; k < summed.size(); ++k) binding[summed[k]] = counter[k];
      std::complex<double> product = 1.0;
      for (const auto& f : t.factors) {
        Instance inst;
        inst.field = f.field;
        inst.conj = f.conj;
        inst.index = f.indices.empty() ? -1 : binding[f.indices.front()];
        for (const auto& d : f.derivs) inst.derivs.push_back(binding[d]);
        std::sort(inst.derivs.begin(), inst.derivs.end());
        product *= lookup(inst);
      }
      sum += product;
      std::size_t k = 0;
      while (k < counter.size() && ++counter[k] == 4) counter[k++] = 0;
      if (k == counter.size()) break;
    }
    total += scale * sum;
  }
  return total;
}

EqualityResult equals(const Expression& a, const Expression& b, const EqualityPolicy& policy) {
  EqualityResult result;
  Expression diff = a - b;
  if (diff.is_zero()) {
    result.equal = true;
    return result;
  }
  const bool complete = diff.relabeling_complete() && a.relabeling_complete() &&
                        b.relabeling_complete();
  if (complete && !policy.numeric_fallback) {
    result.witness = "residual term: " + Expression(std::vector<Term>{diff.terms().front()}).to_string();
    return result;
  }
  result.path = DecisionPath::NumericOracle;
  result.equal = true;
  std::mt19937_64 rng(policy.seed);
  std::uniform_real_distribution<double> jdist(0.3, 1.7);
  std::uniform_int_distribution<int> idist(0, 3);
  std::set<std::string> free = a.is_zero() ? b.free_indices() : a.free_indices();
  for (int trial = 0; trial < policy.trials; ++trial) {
    RandomAssignment assignment(policy.seed * 1000003ULL + static_cast<std::uint64_t>(trial));
    double jv = jdist(rng);
    std::map<std::string, int> binding;
    for (const auto& name : free) binding[name] = idist(rng);
    std::complex<double> va = eval_numeric(a, assignment, policy.params, jv, binding);
    std::complex<double> vb = eval_numeric(b, assignment, policy.params, jv, binding);
    double denom = std::max({1.0, std::abs(va), std::abs(vb)});
    double rel = std::abs(va - vb) / denom;
    result.max_rel_error = std::max(result.max_rel_error, rel);
    if (rel > policy.tolerance && result.equal) {
      result.equal = false;
      std::ostringstream w;
      w << "trial " << trial << " j=" << jv << ": " << va << " vs " << vb;
      result.witness = w.str();
    }
  }
  return result;
}

}  // namespace cew
