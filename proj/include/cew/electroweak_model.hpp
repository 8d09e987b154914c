#pragma once

// The bosonic Lagrangian of the electroweak model with gauge group
// SU(2;j) x U(1): construction, radial change of variables, physical
// fields, grading by powers of j, mass spectrum and gauge invariance.
//
// Builders without a ModelConfig keep g, gp symbolic. Anything that needs
// s = sqrt(g^2 + gp^2) or a division by a coupling works on instantiated
// (rational) couplings.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cew/contraction_ring.hpp"
#include "cew/field_algebra.hpp"
#include "cew/gauge_matrix.hpp"
#include "cew/report.hpp"

namespace cew {

struct ModelConfig {
  Rational g{3};
  Rational gp{4};
  Rational R{2};
  JMode jmode = JMode::nilpotent();
  std::uint64_t seed = 42;
  int samples = 1000;
  /// Pythagorean-exact parameters: s must be rational.
  bool exact = true;

  /// Throws ParameterError.
  void validate() const;
  /// Exact root in exact mode (ParameterError if irrational); otherwise the
  /// rational value of the rounded double root.
  Rational s() const;
  /// e = g gp / s
  Rational e_charge() const { return g * gp / s(); }
  ParamValues values() const { return {g, gp, R}; }
  NumericParams numeric() const { return {g.get_d(), gp.get_d(), R.get_d()}; }
};

using ExprMatrix = Mat2<Expression>;

/// prefactor * (i/2) [[x3, j(x1 - i x2)], [j(x1 + i x2), -x3]]
ExprMatrix su2_matrix(const std::array<Expression, 3>& x, const Expression& prefactor);
/// Inverse of su2_matrix for the prefactor g.
std::array<Expression, 3> su2_components(const ExprMatrix& m);

/// F1, F2, F3 and B with free indices mu, nu, from the matrix
/// F = dA - dA + [A_mu, A_nu].
std::map<std::string, Expression> build_stress_tensors();
/// Gauge Lagrangian from the trace form (1/2g^2) tr F^2 + (1/2gp^2) tr B^2.
Expression build_LA();
/// -1/4 [j^2 (F1)^2 + j^2 (F2)^2 + (F3)^2] - 1/4 (B)^2 from the components.
Expression build_LA_components();
/// 1/2 (D phi)^+ (D phi) with D acting on the column (phi1, j phi2).
Expression build_Lphi();
/// Same Lagrangian from the displayed component formulas of D phi1, D phi2.
Expression build_Lphi_components();
/// D_mu phi1 and D_mu phi2 (free index mu) from the matrix action.
std::array<Expression, 2> covariant_derivative();

/// The substitution A1 -> j A1, A2 -> j A2 (and phi2 -> j phi2).
SubstitutionRules contraction_rules(bool include_phi2);

struct RadialSplit {
  Rational rho;
  GaugeMatrix h;
};
struct NumericRadialSplit {
  double rho = 0.0;
  NumericMatrix h;
};
/// phi = rho h (1, 0)^T with h = [[chi1, -j conj chi2], [j chi2, conj chi1]].
/// Throws DegenerateState when the form vanishes in mode, ParameterError
/// when rho is irrational.
RadialSplit radial_split(const ComplexRational& phi1, const ComplexRational& phi2,
                         const JMode& mode);
NumericRadialSplit radial_split_numeric(std::complex<double> phi1, std::complex<double> phi2,
                                        double j);

/// 1/2 v^+ v with v = {d rho + rho [W + B^ tau3]} (1, 0)^T and
/// W = (i/2) g [j (W1 tau1 + W2 tau2) + W3 tau3].
Expression build_matter_radial();
/// 1/2 (d rho)^2 + 1/8 s^2 rho^2 Z^2 + j^2 g^2/4 rho^2 W+ W-, instantiated.
Expression build_eq25(const ModelConfig& cfg);

/// Instantiates the couplings, then W3 -> (g Z + gp Aem)/s,
/// B -> (gp Z - g Aem)/s, W1 -> (W+ + W-)/sqrt2, W2 -> i (W+ - W-)/sqrt2.
/// Throws ParameterError for a term with an odd number of W1/W2 factors.
Expression physical_basis(const Expression& e, const ModelConfig& cfg);

struct L27Parts {
  Expression L_b;
  Expression L_f;
  Expression L_h;
  Expression total;  // L_b + j^2 L_f + j^4 L_h
  std::map<std::string, Expression> pieces;  // intermediate tensors
};
/// The graded Lagrangian in physical fields, instantiated at cfg.
L27Parts build_L27(const ModelConfig& cfg);
/// L_A (in the W variables) plus the radial matter Lagrangian, in
/// physical fields.
Expression transformed_lagrangian(const ModelConfig& cfg);

struct MassSpectrum {
  double m_A = 0.0;
  double m_Z = 0.0;
  double m_W = 0.0;
  double e_charge = 0.0;
  double cos_theta_W = 0.0;
  /// Exact squared masses as read from the Lagrangian (exact modes).
  std::optional<Rational> m_A2, m_Z2, m_W2;
  /// Exact values when every root is rational.
  struct Exact {
    Rational m_A, m_Z, m_W, e_charge, cos_theta_W;
  };
  std::optional<Exact> exact;
};

/// Reads the masses from the quadratic terms at rho = R, using cfg.jmode.
/// Under iota each field is read from the lowest j-grade it occurs in.
MassSpectrum extract_masses(const ModelConfig& cfg);

/// Lagrangian part that governs `field` in mode: the j = 1 sum for One,
/// the lowest grade containing the field for Nilpotent.
Expression governing_part(const Expression& graded, const std::string& field, const JMode& mode);

VerificationReport verify_radial_identity(const ModelConfig& cfg);
VerificationReport verify_grading(const ModelConfig& cfg);
/// First-order U(1) invariance of L_A + L_phi (symbolic couplings) and of
/// the graded physical Lagrangian at cfg.
VerificationReport check_u1_invariance(const ModelConfig& cfg = {});
/// First-order SU(2;j) invariance of L_A + L_phi with symbolic couplings,
/// plus a finite constant-Omega spot check when j is a number.
VerificationReport check_su2_invariance(const JMode& mode, std::uint64_t seed = 42);
/// tr(F^2) = tr((h^+ F h)^2) for random h and antisymmetric F in the modes
/// One, Nilpotent and Numeric(1e-3).
VerificationReport verify_trace_identity(int samples, std::uint64_t seed);

/// Variations for Omega = 1 + g (eps1 T1 + eps2 T2 + eps3 T3): the
/// parameters are measured in units of 1/g so that every variation is
/// polynomial in g.
SubstitutionRules su2_variation();
/// phi -> (1 + i w) phi, B -> B - (2/gp) dw with w = gp omega / 2.
SubstitutionRules u1_variation();
/// W+ -> (1 - 2i omega) W+, Z unchanged, Aem -> Aem + (2/e) d omega.
SubstitutionRules u1_variation_physical(const ModelConfig& cfg);

}  // namespace cew
