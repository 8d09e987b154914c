#include "doctest.h"

#include "cew/errors.hpp"
#include "cew/gauge_matrix.hpp"

using namespace cew;

namespace {

const ComplexRational I = ComplexRational::i();

GaugeMatrix times(const ContractionScalar& s, const GaugeMatrix& m) { return s * m; }

}  // namespace

TEST_CASE("su2j elements") {
  auto nil = JMode::nilpotent();
  auto omega = su2j_element(1, ComplexRational(Rational(7, 3), Rational(-2)), nil);
  CHECK(determinant(omega).reduce(nil) == ContractionScalar(1));
  CHECK(su2j_element(1, 0, JMode::one()) == GaugeMatrix::identity());
  auto so = su2j_element(Rational(3, 5), ComplexRational(0, Rational(4, 5)), JMode::one());
  CHECK(determinant(so).reduce(JMode::one()) == ContractionScalar(1));
  CHECK(mat_mul(so, adjoint(so), JMode::one()) == GaugeMatrix::identity());
  CHECK_THROWS_AS(su2j_element(2, 0, JMode::one()), NotUnimodular);
  CHECK_THROWS_AS(su2j_element(Rational(3, 5), Rational(4, 5), nil), NotUnimodular);
}

TEST_CASE("generators") {
  auto t3 = generator(3);
  CHECK(t3 == GaugeMatrix::diag(ComplexRational(0, Rational(1, 2)),
                                ComplexRational(0, Rational(-1, 2))));
  auto t1 = reduce(generator(1), JMode::nilpotent());
  CHECK(t1(0, 1) == ContractionScalar::make(0, Rational(1, 2), 1));
  CHECK(t1(0, 0).is_zero());
  auto numeric = evaluate(generator(1), 0.0);
  CHECK(max_abs_difference(numeric, NumericMatrix{}) == 0.0);
}

TEST_CASE("lie elements") {
  auto t = lie_element(0, 0, 2);
  CHECK(t == GaugeMatrix::diag(I, -I));
  auto one = reduce(lie_element(1, 1, 1), JMode::one());
  ComplexRational half_i(0, Rational(1, 2));
  CHECK(one(0, 0) == ContractionScalar(half_i));
  CHECK(one(0, 1) == ContractionScalar(half_i * ComplexRational(1, -1)));
  CHECK(one(1, 0) == ContractionScalar(half_i * ComplexRational(1, 1)));
  CHECK(one(1, 1) == ContractionScalar(-half_i));
  auto nil = reduce(lie_element(1, 1, 1), JMode::nilpotent());
  CHECK(nil(0, 1).max_degree() == 1);
  CHECK(nil(0, 1).coefficient(0).is_zero());
  for (int a = -2; a <= 2; ++a) {
    auto x = lie_element(a, Rational(a, 3), Rational(1, 1 + a * a));
    CHECK((x + adjoint(x)) == GaugeMatrix{});
  }
}

TEST_CASE("commutator table") {
  auto one = JMode::one();
  auto nil = JMode::nilpotent();
  CHECK(commutator(generator(1), generator(2), one) == reduce(times(-1, generator(3)), one));
  CHECK(commutator(generator(1), generator(2), nil) == GaugeMatrix{});
  CHECK(commutator(generator(3), generator(1), nil) == reduce(times(-1, generator(2)), nil));
  CHECK(commutator(generator(2), generator(3), nil) == reduce(times(-1, generator(1)), nil));
  for (auto mode : {one, nil, JMode::numeric(1e-3)}) {
    auto report = verify_commutators(mode);
    CHECK(report.passed);
    CHECK(report.max_abs_error <= 1e-12);
  }
}

TEST_CASE("U(1) elements") {
  CHECK(u1_element(ComplexRational(1)) == GaugeMatrix::identity());
  CHECK(u1em_element(ComplexRational(1)) == GaugeMatrix::identity());
  CHECK(max_abs_difference(u1_element(0.0), NumericMatrix::identity()) == 0.0);
  CHECK(max_abs_difference(u1em_element(0.0), NumericMatrix::identity()) == 0.0);
  auto phase = pythagorean_phase(2, 1);
  DoubletState phi{ContractionScalar(3), ContractionScalar(ComplexRational(1, 2))};
  auto moved = apply(u1em_element(phase), phi);
  CHECK(moved.phi2 == phi.phi2);
  CHECK(moved.phi1 == ContractionScalar(phase * 3));
  auto q = charge();
  CHECK(q == hypercharge() + generator(3));
}

TEST_CASE("hermitian form") {
  for (auto mode : {JMode::one(), JMode::nilpotent()}) {
    CHECK(hermitian_form({1, 0}, mode) == ContractionScalar(1));
  }
  CHECK(hermitian_form({0, 1}, JMode::nilpotent()).is_zero());
  DoubletState phi{ContractionScalar(ComplexRational(Rational(3, 5))),
                   ContractionScalar(ComplexRational(Rational(4, 5)))};
  CHECK(hermitian_form(phi, JMode::one()) == ContractionScalar(1));
}

TEST_CASE("group suites") {
  for (auto mode : {JMode::one(), JMode::nilpotent()}) {
    auto report = verify_group(mode, 200, 9);
    CHECK(report.passed);
    CHECK(report.max_abs_error == 0.0);
  }
  auto numeric = verify_group(JMode::numeric(1e-3), 200, 9);
  CHECK(numeric.passed);
  CHECK(numeric.max_abs_error <= 1e-12);
}
