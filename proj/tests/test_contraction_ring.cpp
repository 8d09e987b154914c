#include <random>

#include "doctest.h"

#include "cew/contraction_ring.hpp"
#include "cew/errors.hpp"

using namespace cew;

namespace {

ContractionScalar poly(std::initializer_list<std::pair<int, ComplexRational>> terms) {
  ContractionScalar out;
  for (const auto& [d, c] : terms) out += ContractionScalar::make(c.re(), c.im(), d);
  return out;
}

ContractionScalar random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 7);
  std::uniform_int_distribution<int> deg(0, 3);
  ContractionScalar out;
  int n = deg(rng) + 1;
  for (int k = 0; k < n; ++k) {
    out += ContractionScalar::make(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)),
                                   deg(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("make") {
  CHECK(ContractionScalar::make(1, 0, 0) == ContractionScalar(1));
  CHECK(ContractionScalar::make(0, 0, 3).is_zero());
  auto ij = ContractionScalar::make(0, 1, 1);
  CHECK(ij.coefficient(1) == ComplexRational::i());
  CHECK(ij.coefficients().size() == 1);
  CHECK_THROWS_AS(ContractionScalar::make(1, 0, -1), std::invalid_argument);
}

TEST_CASE("add and multiply") {
  auto j = ContractionScalar::j();
  CHECK(poly({{0, 2}, {2, 1}}) + poly({{2, 3}}) == poly({{0, 2}, {2, 4}}));
  CHECK(j + ContractionScalar() == j);
  CHECK(j + j == poly({{1, 2}}));
  CHECK(j * j == poly({{2, 1}}));
  CHECK((j * j).reduce(JMode::nilpotent()).is_zero());
  auto a = poly({{0, 2}}), b = poly({{0, 3}}), c = poly({{0, 5}}), d = poly({{0, 7}});
  CHECK((a + j * b) * (c + j * d) == a * c + j * (a * d + b * c) + j * j * b * d);
  CHECK(ContractionScalar(1) * a == a);
  CHECK((poly({{0, 1}, {1, 1}}) - poly({{0, 1}, {1, 1}})).is_zero());
}

TEST_CASE("conjugation") {
  auto ij = ContractionScalar::make(0, 1, 1);
  CHECK(ij.conj() == ContractionScalar::make(0, -1, 1));
  CHECK(poly({{0, 3}, {2, -1}}).conj() == poly({{0, 3}, {2, -1}}));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    auto x = random_scalar(rng), y = random_scalar(rng);
    CHECK(x.conj().conj() == x);
    CHECK((x * y).conj() == x.conj() * y.conj());
    CHECK((x + y).conj() == x.conj() + y.conj());
  }
}

TEST_CASE("division by j follows the nilpotent rules") {
  CHECK(poly({{1, 3}, {2, 2}}).div_j() == poly({{0, 3}, {1, 2}}));
  CHECK_THROWS_AS(poly({{0, 1}, {1, 1}}).div_j(), DivisionUndefined);
  CHECK(ContractionScalar().div_j().is_zero());
}

TEST_CASE("reduction") {
  auto x = poly({{0, 2}, {2, 3}});
  CHECK(x.reduce(JMode::one()) == ContractionScalar(5));
  CHECK(x.reduce(JMode::nilpotent()) == ContractionScalar(2));
  auto r = reduce(ContractionScalar::j(), JMode::numeric(0.1));
  REQUIRE(std::holds_alternative<std::complex<double>>(r));
  CHECK(std::get<std::complex<double>>(r).real() == doctest::Approx(0.1));
  CHECK_THROWS(x.reduce(JMode::numeric(0.5)));
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 1000; ++k) {
    auto x = random_scalar(rng), y = random_scalar(rng), z = random_scalar(rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * y == y * x);
    CHECK(x + y == y + x);
  }
}

TEST_CASE("division by j inverts multiplication by j") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    auto x = random_scalar(rng);
    CHECK(x.times_j().div_j() == x);
    auto shifted = x - ContractionScalar(x.coefficient(0));
    CHECK(shifted.div_j().times_j() == shifted);
  }
}

TEST_CASE("reduction is compatible with products") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    auto x = random_scalar(rng), y = random_scalar(rng);
    for (auto mode : {JMode::one(), JMode::nilpotent()}) {
      CHECK((x * y).reduce(mode) == (x.reduce(mode) * y.reduce(mode)).reduce(mode));
    }
    double eps = 0.37;
    auto lhs = (x * y).evaluate(eps);
    auto rhs = x.evaluate(eps) * y.evaluate(eps);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("0.652") == Rational(163, 250));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  Rational root;
  CHECK(rational_sqrt(Rational(25, 16), root));
  CHECK(root == Rational(5, 4));
  CHECK_FALSE(rational_sqrt(Rational(2), root));
}

TEST_CASE("mode parsing") {
  CHECK(JMode::parse("1") == JMode::one());
  CHECK(JMode::parse("iota") == JMode::nilpotent());
  CHECK(JMode::parse("0.01").kind() == JMode::Kind::Numeric);
  CHECK(JMode::parse("0.01").value() == doctest::Approx(0.01));
  CHECK_THROWS(JMode::parse("-1"));
  CHECK_THROWS(JMode::parse("banana"));
}
