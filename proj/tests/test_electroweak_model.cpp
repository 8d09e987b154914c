#include <cmath>
#include <random>

#include "doctest.h"

#include "cew/electroweak_model.hpp"
#include "cew/errors.hpp"

using namespace cew;

namespace {

Expression P(const char* text) { return parse(text); }

ModelConfig triple(long g, long gp, long R = 2) {
  ModelConfig cfg;
  cfg.g = g;
  cfg.gp = gp;
  cfg.R = R;
  return cfg;
}

// Pythagorean couplings ((m^2 - n^2) k, 2 m n k) with a random rational k.
ModelConfig random_pythagorean(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> mn(1, 9);
  std::uniform_int_distribution<long> small(1, 7);
  long m = mn(rng) + 1;
  long n = std::uniform_int_distribution<long>(1, m - 1)(rng);
  Rational k(small(rng), small(rng));
  k.canonicalize();
  ModelConfig cfg;
  cfg.g = Rational(m * m - n * n) * k;
  cfg.gp = Rational(2 * m * n) * k;
  cfg.R = Rational(small(rng), small(rng));
  cfg.R.canonicalize();
  return cfg;
}

std::set<int> grades(const Expression& e) {
  std::set<int> out;
  for (const auto& [grade, part] : j_decompose(e)) out.insert(grade);
  return out;
}

}  // namespace

TEST_CASE("configuration") {
  ModelConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.s() == 5);
  CHECK(cfg.e_charge() == Rational(12, 5));
  cfg.g = -1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  ModelConfig irrational = triple(1, 1);
  CHECK_THROWS_AS(irrational.validate(), ParameterError);
  irrational.exact = false;
  CHECK(std::abs(irrational.s().get_d() - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("stress tensors") {
  auto t = build_stress_tensors();
  CHECK(t["F3"] == P("d[mu]A3[nu] - d[nu]A3[mu] - j^2 g (A1[mu]A2[nu] - A2[mu]A1[nu])"));
  CHECK(t["F1"] == P("d[mu]A1[nu] - d[nu]A1[mu] - g (A2[mu]A3[nu] - A3[mu]A2[nu])"));
  CHECK(t["F2"] == P("d[mu]A2[nu] - d[nu]A2[mu] - g (A3[mu]A1[nu] - A1[mu]A3[nu])"));
  CHECK(t["B"] == P("d[mu]B[nu] - d[nu]B[mu]"));
  for (const auto& [name, f] : t) {
    CHECK(rename_index(rename_index(rename_index(f, "mu", "x"), "nu", "mu"), "x", "nu") == -f);
  }
}

TEST_CASE("gauge Lagrangian") {
  const Expression la = build_LA();
  CHECK(equals(la, build_LA_components()).equal);
  CHECK(grades(la) == std::set<int>{0, 2, 4});
  CHECK(la.free_indices().empty());

  auto parts = j_decompose(la);
  CHECK(coefficient_of(parts[0], P("d[mu]A3[nu] d[mu]A3[nu]")) == ComplexRational(Rational(-1, 2)));
  CHECK(coefficient_of(parts[0], P("d[mu]B[nu] d[nu]B[mu]")) == ComplexRational(Rational(1, 2)));

  // Contraction route: the j = 1 Lagrangian with A1, A2 scaled by j.
  CHECK(substitute(reduce(la, JMode::one()), contraction_rules(false)) == la);

  RandomAssignment zero_free(3, 0.0);
  CHECK(std::abs(eval_numeric(la, zero_free, {}, 0.7)) == 0.0);
}

TEST_CASE("matter Lagrangian") {
  const Expression lphi = build_Lphi();
  CHECK(equals(lphi, build_Lphi_components()).equal);
  CHECK(substitute(reduce(lphi, JMode::one()), contraction_rules(true)) == lphi);
  CHECK(grades(lphi) == std::set<int>{0, 2, 4});

  auto d = covariant_derivative();
  auto d1 = j_decompose(d[0]);
  CHECK(d1[2] == P("1/2 i g (A1[mu] - i A2[mu]) phi2"));
  CHECK(j_decompose(d[1])[0] ==
        P("d[mu]phi2 - 1/2 i (g A3[mu] - gp B[mu]) phi2 + 1/2 i g (A1[mu] + i A2[mu]) phi1"));

  SubstitutionRules free_limit;
  for (const char* f : {"A1", "A2", "A3", "B"}) free_limit[f] = {Expression(), "h"};
  CHECK(substitute(lphi, free_limit) ==
        P("1/2 d[mu]conj(phi1) d[mu]phi1 + 1/2 j^2 d[mu]conj(phi2) d[mu]phi2"));
}

TEST_CASE("radial split") {
  const ComplexRational two(2), three(3), four(4), zero(0);
  auto trivial = radial_split(two, zero, JMode::one());
  CHECK(trivial.rho == 2);
  CHECK(trivial.h == GaugeMatrix::identity());

  auto one = radial_split(three, four, JMode::one());
  CHECK(one.rho == 5);
  CHECK(one.h(0, 0) == ContractionScalar(ComplexRational(Rational(3, 5))));
  CHECK(one.h(1, 0) == ContractionScalar::make(Rational(4, 5), 0, 1));

  auto nil = radial_split(three, four, JMode::nilpotent());
  CHECK(nil.rho == 3);
  CHECK_THROWS_AS(radial_split(zero, four, JMode::nilpotent()), DegenerateState);
  CHECK_THROWS_AS(radial_split(ComplexRational(1), ComplexRational(1), JMode::one()),
                  ParameterError);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> mn(1, 8);
  for (int n = 0; n < 200; ++n) {
    // phi1 = rho * (3/5 + 4/5 i) * a, chosen so the forms are perfect squares.
    JMode mode = n % 2 ? JMode::one() : JMode::nilpotent();
    long m = mn(rng) + 1;
    long k = std::uniform_int_distribution<long>(1, m - 1)(rng);
    ComplexRational phi1 = ComplexRational(Rational(m * m - k * k), 0);
    ComplexRational phi2 = ComplexRational(0, Rational(2 * m * k));
    auto split = radial_split(phi1, phi2, mode);
    CHECK(determinant(split.h).reduce(mode) == ContractionScalar(1));
    CHECK(mat_mul(adjoint(split.h), split.h, mode) == GaugeMatrix::identity());
    CHECK(split.h(0, 0) * ContractionScalar(ComplexRational(split.rho)) == ContractionScalar(phi1));
  }

  auto num = radial_split_numeric({3.0, 0.0}, {4.0, 0.0}, 0.5);
  CHECK(num.rho == doctest::Approx(std::sqrt(13.0)));
  CHECK(max_abs_difference(adjoint(num.h) * num.h, NumericMatrix::identity()) < 1e-15);
  CHECK_THROWS_AS(radial_split_numeric({0.0, 0.0}, {4.0, 0.0}, 0.0), DegenerateState);
}

TEST_CASE("radial matter Lagrangian") {
  const Expression lrad = build_matter_radial();
  for (auto cfg : {triple(3, 4), triple(5, 12), triple(8, 15)}) {
    Expression physical = physical_basis(lrad, cfg);
    CHECK(physical == build_eq25(cfg));
    Rational s = cfg.s();
    CHECK(coefficient_of(physical, P("rho rho Z[mu] Z[mu]")) ==
          ComplexRational((cfg.g * cfg.g + cfg.gp * cfg.gp) / 8));
    CHECK(coefficient_of(physical, P("j^2 rho rho W+[mu] W-[mu]")) ==
          ComplexRational(cfg.g * cfg.g / 4));
    CHECK(s * s == cfg.g * cfg.g + cfg.gp * cfg.gp);
  }
  SubstitutionRules constant;
  for (const char* f : {"W1", "W2", "W3", "B"}) constant[f] = {Expression(), "h"};
  CHECK(substitute(substitute(lrad, constant), {{"rho", {Expression(2L), ""}}}).is_zero());

  auto report = verify_radial_identity(triple(3, 4));
  CHECK(report.passed);
  CHECK(report.details.size() == 2);
}

TEST_CASE("physical basis") {
  ModelConfig cfg = triple(3, 4);
  CHECK(physical_basis(P("1/5 (3 W3[mu] + 4 B[mu])"), cfg) == P("Z[mu]"));
  CHECK(physical_basis(P("g W3[mu] + gp B[mu]"), cfg) == P("5 Z[mu]"));
  CHECK(physical_basis(P("gp W3[mu] - g B[mu]"), cfg) == P("5 Aem[mu]"));
  // W1 W1 + W2 W2 = 2 W+ W-
  CHECK(physical_basis(P("W1[mu] W1[mu] + W2[mu] W2[mu]"), cfg) == P("2 W+[mu] W-[mu]"));
  CHECK_THROWS_AS(physical_basis(P("W1[mu] Z[mu]"), cfg), ParameterError);
  ModelConfig irrational = triple(1, 2);
  CHECK_THROWS_AS(physical_basis(P("W3[mu] B[mu]"), irrational), ParameterError);
}

TEST_CASE("graded physical Lagrangian") {
  ModelConfig cfg = triple(3, 4);
  L27Parts parts = build_L27(cfg);
  CHECK(grades(parts.total) == std::set<int>{0, 2, 4});
  CHECK(coefficient_of(parts.L_b, P("rho rho Z[mu] Z[mu]")) == ComplexRational(Rational(25, 8)));
  CHECK(coefficient_of(parts.L_b, P("d[mu]rho d[mu]rho")) == ComplexRational(Rational(1, 2)));
  CHECK(coefficient_of(parts.L_f, P("rho rho W+[mu] W-[mu]")) == ComplexRational(Rational(9, 4)));
  CHECK(parts.L_h == scale(parts.pieces["H"] * parts.pieces["H"], ComplexRational(Rational(-1, 4))));
  CHECK(parts.pieces["H"] == P("3 i (W+[mu] W-[nu] - W-[mu] W+[nu])"));
  CHECK(field_symbols(parts.L_b).count("W+") == 0);

  for (auto point : {triple(3, 4), triple(5, 12), triple(8, 15)}) {
    auto report = verify_grading(point);
    CHECK(report.passed);
    CHECK(report.decision_path == DecisionPath::ExactSymbolic);
  }
  ModelConfig floats;
  floats.g = Rational(0.652);
  floats.gp = Rational(0.357);
  floats.exact = false;
  auto report = verify_grading(floats);
  CHECK(report.passed);
  CHECK(report.decision_path == DecisionPath::NumericOracle);
  CHECK(report.max_abs_error <= 1e-9);

  // A wrong sign in H breaks the identity.
  Expression tampered = parts.total + scale(parts.pieces["H"] * parts.pieces["H"],
                                            ComplexRational(Rational(1, 2))) * Expression::j(4);
  CHECK_FALSE(equals(transformed_lagrangian(cfg), tampered).equal);
}

TEST_CASE("mass spectrum") {
  ModelConfig cfg = triple(3, 4);
  for (const JMode& mode : {JMode::one(), JMode::nilpotent()}) {
    cfg.jmode = mode;
    MassSpectrum m = extract_masses(cfg);
    REQUIRE(m.exact);
    CHECK(m.exact->m_W == 3);
    CHECK(m.exact->m_Z == 5);
    CHECK(m.exact->m_A == 0);
    CHECK(m.exact->e_charge == Rational(12, 5));
    CHECK(m.exact->cos_theta_W == Rational(3, 5));
  }
  cfg.jmode = JMode::numeric(0.01);
  MassSpectrum num = extract_masses(cfg);
  CHECK(num.m_W == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(num.m_Z == doctest::Approx(5.0).epsilon(1e-12));

  // cos theta = 80/91 and m_W = 80 at R = 2 fix g = 80, gp = sqrt(91^2 - 80^2).
  ModelConfig calibrated;
  calibrated.g = 80;
  calibrated.gp = Rational(std::sqrt(91.0 * 91.0 - 80.0 * 80.0));
  calibrated.exact = false;
  MassSpectrum observed = extract_masses(calibrated);
  CHECK(std::abs(observed.m_W - 80.0) / 80.0 < 1e-12);
  CHECK(std::abs(observed.m_Z - 91.0) / 91.0 < 1e-10);
  CHECK(observed.m_A == 0.0);

  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    ModelConfig random = random_pythagorean(rng);
    random.jmode = n % 2 ? JMode::one() : JMode::nilpotent();
    MassSpectrum m = extract_masses(random);
    REQUIRE(m.m_W2);
    const Rational half_r = random.R / 2;
    CHECK(*m.m_W2 == random.g * random.g * half_r * half_r);
    CHECK(*m.m_Z2 == *m.m_W2 + random.gp * random.gp * half_r * half_r);
    CHECK(*m.m_A2 == 0);
    REQUIRE(m.exact);
    CHECK(m.exact->cos_theta_W == random.g / random.s());
    CHECK(m.m_W <= m.m_Z);
  }
}

TEST_CASE("governing parts") {
  ModelConfig cfg = triple(3, 4);
  Expression total = build_L27(cfg).total;
  Expression w = governing_part(total, "W+", JMode::nilpotent());
  CHECK(w == build_L27(cfg).L_f);
  CHECK(governing_part(total, "Z", JMode::nilpotent()) == build_L27(cfg).L_b);
  CHECK(governing_part(total, "Z", JMode::one()) == reduce(total, JMode::one()));
  CHECK_THROWS_AS(governing_part(total, "Z", JMode::numeric(0.1)), std::invalid_argument);
}

TEST_CASE("gauge invariance") {
  for (const JMode& mode : {JMode::one(), JMode::nilpotent(), JMode::numeric(0.01)}) {
    auto report = check_su2_invariance(mode);
    CHECK_MESSAGE(report.passed, report.witness.value_or(""));
  }
  auto u1 = check_u1_invariance(triple(3, 4));
  CHECK_MESSAGE(u1.passed, u1.witness.value_or(""));
  auto u1b = check_u1_invariance(triple(5, 12));
  CHECK(u1b.passed);

  // Mass terms for A3 or W+ break the symmetries.
  Expression broken = build_LA() + build_Lphi() + P("A3[mu] A3[mu]");
  CHECK_FALSE(reduce(vary(broken, su2_variation()), JMode::one()).is_zero());
  ModelConfig cfg = triple(3, 4);
  Expression broken_u1 = build_L27(cfg).total + P("Aem[mu] Aem[mu]");
  CHECK_FALSE(vary(broken_u1, u1_variation_physical(cfg)).is_zero());
  // The Z mass term alone is invariant.
  CHECK(vary(P("Z[mu] Z[mu]"), u1_variation_physical(cfg)).is_zero());
}

TEST_CASE("trace identity") {
  auto report = verify_trace_identity(100, 3);
  CHECK(report.passed);
  CHECK(report.details.size() == 3);
  CHECK(report.max_abs_error <= 1e-10);
  CHECK_THROWS_AS(verify_trace_identity(0, 1), std::invalid_argument);
}
