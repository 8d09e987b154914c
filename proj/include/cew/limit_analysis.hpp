#pragma once

// The contraction limit j -> 0: suppression of the fiber and quartic parts
// of the graded Lagrangian, decoupling of the base equations of motion and
// invariance of the mass spectrum.

#include <cstdint>
#include <random>
#include <vector>

#include "cew/electroweak_model.hpp"
#include "cew/report.hpp"

namespace cew {

struct ScalingReport {
  std::vector<double> j_values;
  /// Mean |j^2 L_f| / |L_b| over the samples.
  std::vector<double> ratios_f;
  /// Mean |j^4 L_h| / |L_b|.
  std::vector<double> ratios_h;
  double slope_f = 0.0;
  double slope_h = 0.0;
  double r2_f = 0.0;
  double r2_h = 0.0;
  /// min(r2_f, r2_h)
  double fit_r2 = 0.0;
  /// Draws discarded because |L_b| < 1e-12.
  int degenerate_samples = 0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
/// Ordinary least squares y = slope x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// 10^-1 ... 10^-3 in `points` log-spaced steps.
std::vector<double> default_j_values(int points = 5);

/// Evaluates the three graded parts at rho = R on random field draws.
/// Throws std::invalid_argument unless j values lie in (0, 1] and strictly
/// decrease, and samples >= 10.
ScalingReport scaling_sweep(const std::vector<double>& j_values, int samples,
                            const ModelConfig& cfg, std::uint64_t seed);
/// slope_f = 2 +- 0.01, slope_h = 4 +- 0.02, fit_r2 >= 0.999.
VerificationReport scaling_check(const ScalingReport& report);

/// Equation of motion for `field` at rho = R in mode: the j = 1 sum for One,
/// the lowest nonzero grade for Nilpotent.
Expression equation_of_motion(const ModelConfig& cfg, const std::string& field,
                              const JMode& mode, const std::string& idx = "nu");

/// Base equations free of W+- under iota, coupled at j = 1; the W+ equation
/// under iota still sees Z or Aem.
VerificationReport decoupling_check(const ModelConfig& cfg);

/// Pythagorean couplings ((m^2 - n^2) k, 2 m n k) and radius with random
/// rational k, R.
ModelConfig random_pythagorean_config(std::mt19937_64& rng);

/// Exact squared masses and e agree between One and Nilpotent for cfg and
/// for `random_configs` further Pythagorean configurations.
VerificationReport mass_invariance_check(const ModelConfig& cfg, int random_configs = 0);

}  // namespace cew
