#pragma once

// 2x2 matrices realising SU(2;j), su(2;j), U(1) and U(1)_em.
//
// Graded constructors keep j symbolic; mode-taking operations reduce the
// entries (One, Nilpotent) or evaluate them (Numeric) at the end.

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "cew/contraction_ring.hpp"
#include "cew/report.hpp"

namespace cew {

inline std::complex<double> conjugate(const std::complex<double>& z) { return std::conj(z); }

template <class T>
struct Mat2 {
  std::array<std::array<T, 2>, 2> m{};

  T& operator()(int r, int c) { return m[r][c]; }
  const T& operator()(int r, int c) const { return m[r][c]; }

  static Mat2 diag(const T& a, const T& b) {
    Mat2 out;
    out(0, 0) = a;
    out(1, 1) = b;
    out(0, 1) = T(0);
    out(1, 0) = T(0);
    return out;
  }
  static Mat2 identity() { return diag(T(1), T(1)); }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, c) + b(r, c);
    return out;
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, c) - b(r, c);
    return out;
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
    return out;
  }
  friend Mat2 operator*(const T& s, const Mat2& a) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out(r, c) = s * a(r, c);
    return out;
  }
  friend bool operator==(const Mat2& a, const Mat2& b) { return a.m == b.m; }
};

template <class T>
Mat2<T> adjoint(const Mat2<T>& a) {
  Mat2<T> out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = conjugate(a(c, r));
  return out;
}

template <class T>
T trace(const Mat2<T>& a) {
  return a(0, 0) + a(1, 1);
}

template <class T>
T determinant(const Mat2<T>& a) {
  return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}

template <class T>
Mat2<T> commutator(const Mat2<T>& x, const Mat2<T>& y) {
  return x * y - y * x;
}

using GaugeMatrix = Mat2<ContractionScalar>;
using NumericMatrix = Mat2<std::complex<double>>;

/// Base component phi1 and fiber component phi2. The column acted on by
/// SU(2;j) is (phi1, j phi2); the j weight is not stored.
struct DoubletState {
  ContractionScalar phi1;
  ContractionScalar phi2;
};

GaugeMatrix reduce(const GaugeMatrix& x, const JMode& mode);
NumericMatrix evaluate(const GaugeMatrix& x, double j);
double max_abs_difference(const NumericMatrix& a, const NumericMatrix& b);

/// Omega(j) = [[alpha, j beta], [-j conj(beta), conj(alpha)]], kept graded.
/// Throws NotUnimodular unless |alpha|^2 + j^2 |beta|^2 reduces to 1 in mode
/// (within 1e-12 for Numeric).
GaugeMatrix su2j_element(const ComplexRational& alpha, const ComplexRational& beta,
                         const JMode& mode);
/// Floating-point element for j = eps.
NumericMatrix su2j_element_numeric(std::complex<double> alpha, std::complex<double> beta,
                                   double eps);

/// T_1 = j (i/2) tau_1, T_2 = j (i/2) tau_2, T_3 = (i/2) tau_3.
GaugeMatrix generator(int k);
GaugeMatrix lie_element(const Rational& a1, const Rational& a2, const Rational& a3);
/// U(1) hypercharge generator Y = (i/2) 1.
GaugeMatrix hypercharge();
/// Electric charge Q = Y + T_3.
GaugeMatrix charge();

/// Product and commutator reduced in an exact mode.
GaugeMatrix mat_mul(const GaugeMatrix& x, const GaugeMatrix& y, const JMode& mode);
GaugeMatrix commutator(const GaugeMatrix& x, const GaugeMatrix& y, const JMode& mode);

/// diag(e^{i beta/2}, e^{i beta/2}) and diag(e^{i gamma}, 1) for real angles.
NumericMatrix u1_element(double beta);
NumericMatrix u1em_element(double gamma);
/// Exact versions taking the unit-modulus phases e^{i beta/2} and e^{i gamma}.
GaugeMatrix u1_element(const ComplexRational& half_phase);
GaugeMatrix u1em_element(const ComplexRational& phase);

/// M (phi1, j phi2) re-expressed as a DoubletState.
DoubletState apply(const GaugeMatrix& m, const DoubletState& phi);
/// |phi1|^2 + j^2 |phi2|^2 reduced in an exact mode.
ContractionScalar hermitian_form(const DoubletState& phi, const JMode& mode);

/// Rational point on the unit circle from the Pythagorean parametrisation
/// ((m^2 - n^2) + 2mn i) / (m^2 + n^2).
ComplexRational pythagorean_phase(long m, long n);

/// Random group elements. One: rational unit quaternions. Nilpotent:
/// rational phase alpha, beta from the box [-5,5]^2. Numeric: |eps beta| < 1.
GaugeMatrix random_su2j_element(const JMode& mode, std::mt19937_64& rng);
NumericMatrix random_su2j_numeric(double eps, std::mt19937_64& rng);

VerificationReport verify_commutators(const JMode& mode);
VerificationReport verify_group(const JMode& mode, int samples, std::uint64_t seed);

}  // namespace cew
