#include "cew/electroweak_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cew/errors.hpp"

namespace cew {

namespace {

const std::complex<double> kI(0.0, 1.0);

ComplexRational q(long num, long den = 1) { return ComplexRational(Rational(num, den)); }
ComplexRational iq(long num, long den = 1) {
  return ComplexRational(Rational(0), Rational(num, den));
}

Expression vec(std::string_view name, const std::string& idx) {
  return Expression::field(name, {idx});
}
Expression grad(std::string_view name, const std::string& d, const std::string& idx) {
  return Expression::field(name, {idx}, {d});
}
/// d_mu X_nu - d_nu X_mu
Expression curl(std::string_view name) {
  return grad(name, "mu", "nu") - grad(name, "nu", "mu");
}

const Expression& g_sym() {
  static const Expression g = Expression::param({1, 0, 0});
  return g;
}
const Expression& gp_sym() {
  static const Expression gp = Expression::param({0, 1, 0});
  return gp;
}

ExprMatrix derive(const ExprMatrix& m, const std::string& idx) {
  ExprMatrix out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = cew::derive(m(r, c), idx);
  return out;
}

std::array<Expression, 3> triplet(const std::string& prefix, const std::string& idx) {
  return {vec(prefix + "1", idx), vec(prefix + "2", idx), vec(prefix + "3", idx)};
}

ExprMatrix gauge_field(const std::string& idx) { return su2_matrix(triplet("A", idx), g_sym()); }

ExprMatrix field_strength() {
  ExprMatrix am = gauge_field("mu");
  ExprMatrix an = gauge_field("nu");
  return derive(an, "mu") - derive(am, "nu") + commutator(am, an);
}

std::string first_term(const Expression& e) {
  if (e.is_zero()) return "0";
  return Expression(std::vector<Term>{e.terms().front()}).to_string();
}

/// Zero test: exact when the expression is zero or the couplings are exact,
/// randomized evaluation otherwise.
SubCheck zero_check(std::string name, const Expression& e, bool exact, const NumericParams& params,
                    std::uint64_t seed) {
  SubCheck check;
  check.name = std::move(name);
  if (e.is_zero()) return check;
  if (exact && e.relabeling_complete()) {
    check.passed = false;
    check.note = "residual term: " + first_term(e);
    return check;
  }
  EqualityPolicy policy;
  policy.numeric_fallback = true;
  policy.params = params;
  policy.seed = seed;
  EqualityResult r = equals(e, Expression(), policy);
  check.passed = r.equal;
  check.max_abs_error = r.max_rel_error;
  check.note = r.equal ? "numeric oracle" : r.witness;
  return check;
}

SubCheck equality_check(std::string name, const Expression& a, const Expression& b, bool exact,
                        const NumericParams& params, std::uint64_t seed,
                        VerificationReport& report) {
  EqualityPolicy policy;
  policy.numeric_fallback = !exact;
  policy.params = params;
  policy.seed = seed;
  EqualityResult r = equals(a, b, policy);
  if (r.path == DecisionPath::NumericOracle) {
    report.decision_path = DecisionPath::NumericOracle;
    report.tolerance = policy.tolerance;
  }
  SubCheck check;
  check.name = std::move(name);
  check.passed = r.equal;
  check.max_abs_error = r.max_rel_error;
  check.note = r.equal ? std::string(to_string(r.path)) : r.witness;
  return check;
}

NumericMatrix su2_numeric(const std::array<double, 3>& x, double prefactor, double j) {
  const std::complex<double> c = prefactor * kI / 2.0;
  NumericMatrix m;
  m(0, 0) = c * x[2];
  m(0, 1) = c * j * (x[0] - kI * x[1]);
  m(1, 0) = c * j * (x[0] + kI * x[1]);
  m(1, 1) = -c * x[2];
  return m;
}

std::array<std::complex<double>, 3> su2_numeric_components(const NumericMatrix& m,
                                                           double prefactor, double j) {
  const std::complex<double> c = prefactor * kI / 2.0;
  return {(m(0, 1) + m(1, 0)) / (2.0 * c * j), (m(1, 0) - m(0, 1)) / (2.0 * kI * c * j),
          m(0, 0) / c};
}

double relative_gap(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// SU(2;j) variation for Omega = 1 + g sum_k eps_k T_k restricted to the
// active generators; `local` keeps the d eps terms.
SubstitutionRules su2_rules(const std::array<bool, 3>& active, bool local) {
  std::array<Expression, 3> eps;
  for (int k = 0; k < 3; ++k) {
    if (active[k]) eps[k] = Expression::field("eps" + std::to_string(k + 1));
  }
  ExprMatrix e = su2_matrix(eps, g_sym());
  ExprMatrix a = gauge_field("mu");
  ExprMatrix da = commutator(e, a);
  if (local) da = da - derive(e, "mu");
  std::array<Expression, 3> comps = su2_components(da);

  const std::array<Expression, 2> col = {Expression::field("phi1"),
                                         Expression::j() * Expression::field("phi2")};
  SubstitutionRules rules;
  rules["phi1"] = {e(0, 0) * col[0] + e(0, 1) * col[1], ""};
  rules["phi2"] = {divide_j(e(1, 0) * col[0] + e(1, 1) * col[1]), ""};
  for (int k = 0; k < 3; ++k) rules["A" + std::to_string(k + 1)] = {comps[k], "mu"};
  return rules;
}

// Terms without gradients of the gauge parameters (constant eps_k).
Expression drop_parameter_gradients(const Expression& e) {
  std::vector<Term> kept;
  for (const auto& t : e.terms()) {
    bool gradient = false;
    for (const auto& f : t.factors) {
      gradient |= !f.derivs.empty() && field_info(f.field).name.starts_with("eps");
    }
    if (!gradient) kept.push_back(t);
  }
  return Expression(std::move(kept));
}

}  // namespace

// ---- configuration -----------------------------------------------------

void ModelConfig::validate() const {
  if (sgn(g) <= 0) throw ParameterError("g must be positive");
  if (sgn(gp) <= 0) throw ParameterError("gp must be positive");
  if (sgn(R) <= 0) throw ParameterError("R must be positive");
  if (samples < 1) throw ParameterError("samples must be at least 1");
  if (exact) s();
}

Rational ModelConfig::s() const {
  Rational square = g * g + gp * gp;
  Rational root;
  if (rational_sqrt(square, root)) return root;
  if (exact) {
    throw ParameterError("sqrt(g^2 + gp^2) = sqrt(" + to_string(square) +
                         ") is irrational; exact mode needs a Pythagorean triple");
  }
  return Rational(std::sqrt(square.get_d()));
}

// ---- matrices and stress tensors ---------------------------------------

ExprMatrix su2_matrix(const std::array<Expression, 3>& x, const Expression& prefactor) {
  const Expression c = prefactor * Expression(iq(1, 2));
  const Expression j = Expression::j();
  const Expression i(ComplexRational::i());
  ExprMatrix m;
  m(0, 0) = c * x[2];
  m(0, 1) = c * j * (x[0] - i * x[1]);
  m(1, 0) = c * j * (x[0] + i * x[1]);
  m(1, 1) = -(c * x[2]);
  return m;
}

std::array<Expression, 3> su2_components(const ExprMatrix& m) {
  const ParamMonomial g{1, 0, 0};
  Expression x3 = scale(divide(m(0, 0), g), iq(-2));
  Expression x1 = scale(divide_j(divide(m(0, 1) + m(1, 0), g)), iq(-1));
  Expression x2 = -divide_j(divide(m(1, 0) - m(0, 1), g));
  return {x1, x2, x3};
}

std::map<std::string, Expression> build_stress_tensors() {
  auto comps = su2_components(field_strength());
  return {{"F1", comps[0]}, {"F2", comps[1]}, {"F3", comps[2]}, {"B", curl("B")}};
}

Expression build_LA() {
  ExprMatrix f = field_strength();
  Expression tr_f2 = trace(f * f);
  Expression bhat = gp_sym() * Expression(iq(1, 2)) * curl("B");
  Expression tr_b2 = Expression(2L) * bhat * bhat;
  return scale(divide(tr_f2, {2, 0, 0}), q(1, 2)) + scale(divide(tr_b2, {0, 2, 0}), q(1, 2));
}

Expression build_LA_components() {
  auto t = build_stress_tensors();
  Expression j2 = Expression::j(2);
  Expression sum = j2 * t["F1"] * t["F1"] + j2 * t["F2"] * t["F2"] + t["F3"] * t["F3"] +
                   t["B"] * t["B"];
  return scale(sum, q(-1, 4));
}

std::array<Expression, 2> covariant_derivative() {
  const std::array<Expression, 2> col = {Expression::field("phi1"),
                                         Expression::j() * Expression::field("phi2")};
  ExprMatrix a = gauge_field("mu");
  Expression bhat = gp_sym() * Expression(iq(1, 2)) * vec("B", "mu");
  std::array<Expression, 2> d;
  for (int r = 0; r < 2; ++r) {
    d[r] = cew::derive(col[r], "mu") + a(r, 0) * col[0] + a(r, 1) * col[1] + bhat * col[r];
  }
  return {d[0], divide_j(d[1])};
}

Expression build_Lphi() {
  auto d = covariant_derivative();
  Expression sum = conjugate(d[0]) * d[0] + Expression::j(2) * conjugate(d[1]) * d[1];
  return scale(sum, q(1, 2));
}

Expression build_Lphi_components() {
  Expression d1 = parse(
      "d[mu]phi1 + 1/2 i (g A3[mu] + gp B[mu]) phi1 + 1/2 i g j^2 (A1[mu] - i A2[mu]) phi2");
  Expression d2 =
      parse("d[mu]phi2 - 1/2 i (g A3[mu] - gp B[mu]) phi2 + 1/2 i g (A1[mu] + i A2[mu]) phi1");
  Expression sum = conjugate(d1) * d1 + Expression::j(2) * conjugate(d2) * d2;
  return scale(sum, q(1, 2));
}

SubstitutionRules contraction_rules(bool include_phi2) {
  SubstitutionRules rules{{"A1", j_scaling("A1")}, {"A2", j_scaling("A2")}};
  if (include_phi2) rules["phi2"] = j_scaling("phi2");
  return rules;
}

// ---- radial variables --------------------------------------------------

RadialSplit radial_split(const ComplexRational& phi1, const ComplexRational& phi2,
                         const JMode& mode) {
  if (!mode.exact()) throw std::invalid_argument("radial_split needs an exact mode");
  ContractionScalar form = (ContractionScalar(phi1.norm()) +
                            ContractionScalar(phi2.norm()).times_j(2))
                               .reduce(mode);
  Rational value = form.coefficient(0).re();
  if (sgn(value) <= 0) throw DegenerateState("hermitian form vanishes in mode " + mode.name());
  RadialSplit out;
  if (!rational_sqrt(value, out.rho)) {
    throw ParameterError("rho = sqrt(" + to_string(value) + ") is irrational");
  }
  const ComplexRational chi1 = phi1 / ComplexRational(out.rho);
  const ComplexRational chi2 = phi2 / ComplexRational(out.rho);
  out.h(0, 0) = ContractionScalar(chi1);
  out.h(0, 1) = ContractionScalar(-chi2.conj()).times_j();
  out.h(1, 0) = ContractionScalar(chi2).times_j();
  out.h(1, 1) = ContractionScalar(chi1.conj());
  return out;
}

NumericRadialSplit radial_split_numeric(std::complex<double> phi1, std::complex<double> phi2,
                                        double j) {
  const double form = std::norm(phi1) + j * j * std::norm(phi2);
  if (!(form > 0.0)) throw DegenerateState("hermitian form vanishes");
  NumericRadialSplit out;
  out.rho = std::sqrt(form);
  const std::complex<double> chi1 = phi1 / out.rho;
  const std::complex<double> chi2 = phi2 / out.rho;
  out.h(0, 0) = chi1;
  out.h(0, 1) = -j * std::conj(chi2);
  out.h(1, 0) = j * chi2;
  out.h(1, 1) = std::conj(chi1);
  return out;
}

Expression build_matter_radial() {
  ExprMatrix w = su2_matrix(triplet("W", "mu"), g_sym());
  Expression bhat = gp_sym() * Expression(iq(1, 2)) * vec("B", "mu");
  Expression rho = Expression::field("rho");
  Expression drho = Expression::field("rho", {}, {"mu"});
  // {d rho + rho [W + B^ tau3]} applied to (1, 0)
  Expression v0 = drho + rho * (w(0, 0) + bhat);
  Expression v1 = rho * w(1, 0);
  return scale(conjugate(v0) * v0 + conjugate(v1) * v1, q(1, 2));
}

Expression build_eq25(const ModelConfig& cfg) {
  const Rational s = cfg.s();
  Expression rho2 = Expression::field("rho") * Expression::field("rho");
  Expression drho = Expression::field("rho", {}, {"mu"});
  Expression out = scale(drho * drho, q(1, 2));
  out += scale(rho2 * vec("Z", "mu") * vec("Z", "mu"), ComplexRational(s * s / 8));
  out += scale(Expression::j(2) * rho2 * vec("W+", "mu") * vec("W-", "mu"),
               ComplexRational(cfg.g * cfg.g / 4));
  return out;
}

// ---- physical fields ---------------------------------------------------

Expression physical_basis(const Expression& e, const ModelConfig& cfg) {
  const Rational s = cfg.s();
  const Expression z = vec("Z", "h");
  const Expression a = vec("Aem", "h");
  const Expression wp = vec("W+", "h");
  const Expression wm = vec("W-", "h");
  SubstitutionRules rules;
  rules["W3"] = {scale(scale(z, cfg.g) + scale(a, cfg.gp), ComplexRational(1 / s)), "h"};
  rules["B"] = {scale(scale(z, cfg.gp) - scale(a, cfg.g), ComplexRational(1 / s)), "h"};
  rules["W1"] = {wp + wm, "h"};
  rules["W2"] = {scale(wp - wm, ComplexRational::i()), "h"};

  const int w1 = field_id("W1");
  const int w2 = field_id("W2");
  std::map<int, std::vector<Term>> by_count;
  const Expression instantiated = instantiate(e, cfg.values());
  for (const auto& t : instantiated.terms()) {
    int n = 0;
    for (const auto& f : t.factors) n += (f.field == w1 || f.field == w2) ? 1 : 0;
    if (n % 2 != 0) {
      throw ParameterError("term with an odd number of W1/W2 factors: " +
                           Expression(std::vector<Term>{t}).to_string());
    }
    by_count[n].push_back(t);
  }
  Expression out;
  for (auto& [n, terms] : by_count) {
    Rational factor(1);
    for (int k = 0; k < n / 2; ++k) factor /= 2;
    out += scale(substitute(Expression(std::move(terms)), rules), ComplexRational(factor));
  }
  return out;
}

L27Parts build_L27(const ModelConfig& cfg) {
  const Rational g = cfg.g;
  const Rational gp = cfg.gp;
  const Rational s = cfg.s();
  auto V = [&](const std::string& idx) { return scale(vec("Z", idx), g) + scale(vec("Aem", idx), gp); };
  auto K = [&](std::string_view w) {
    return vec(w, "mu") * V("nu") - vec(w, "nu") * V("mu");
  };
  const Expression rho = Expression::field("rho");
  const Expression drho = Expression::field("rho", {}, {"mu"});
  const Expression rho2 = rho * rho;

  L27Parts out;
  Expression kp = K("W+");
  Expression km = K("W-");
  Expression wp = curl("W+");
  Expression wm = curl("W-");
  Expression z = curl("Z");
  Expression a = curl("Aem");
  Expression p = wp * km - wm * kp;
  Expression sq = kp * km;
  Expression h = scale(vec("W+", "mu") * vec("W-", "nu") - vec("W-", "mu") * vec("W+", "nu"),
                       ComplexRational(Rational(0), g));
  out.pieces["K+"] = kp;
  out.pieces["K-"] = km;
  out.pieces["calW+"] = wp;
  out.pieces["calW-"] = wm;
  out.pieces["calZ"] = z;
  out.pieces["calA"] = a;
  out.pieces["P"] = p;
  out.pieces["S"] = sq;
  out.pieces["H"] = h;
  // nabla_mu W+_nu = (d_mu + i g W3_mu) W+_nu with g W3 = g V / s
  out.pieces["nablaW+"] =
      grad("W+", "mu", "nu") +
      scale(V("mu") * vec("W+", "nu"), ComplexRational(Rational(0), g / s));
  out.pieces["nablaW-"] =
      grad("W-", "mu", "nu") -
      scale(V("mu") * vec("W-", "nu"), ComplexRational(Rational(0), g / s));

  out.L_b = scale(drho * drho, q(1, 2)) - scale(a * a, q(1, 4)) - scale(z * z, q(1, 4)) +
            scale(rho2 * vec("Z", "mu") * vec("Z", "mu"), ComplexRational(s * s / 8));
  out.L_f = scale(wp * wm, q(-1, 2)) +
            scale(rho2 * vec("W+", "mu") * vec("W-", "mu"), ComplexRational(g * g / 4)) +
            scale(p, ComplexRational(Rational(0), -g / (2 * s))) -
            scale(sq, ComplexRational(g * g / (2 * s * s))) -
            scale((scale(z, g) + scale(a, gp)) * h, ComplexRational(1 / (2 * s)));
  out.L_h = scale(h * h, q(-1, 4));
  out.total = out.L_b + Expression::j(2) * out.L_f + Expression::j(4) * out.L_h;
  return out;
}

Expression transformed_lagrangian(const ModelConfig& cfg) {
  SubstitutionRules to_w;
  for (int k = 1; k <= 3; ++k) {
    to_w["A" + std::to_string(k)] = {vec("W" + std::to_string(k), "h"), "h"};
  }
  Expression la = substitute(build_LA(), to_w);
  return physical_basis(la + build_matter_radial(), cfg);
}

// ---- masses ------------------------------------------------------------

Expression governing_part(const Expression& graded, const std::string& field, const JMode& mode) {
  switch (mode.kind()) {
    case JMode::Kind::One:
      return reduce(graded, mode);
    case JMode::Kind::Nilpotent:
      for (const auto& [grade, part] : j_decompose(graded)) {
        if (field_symbols(part).count(field)) return part;
      }
      return Expression();
    case JMode::Kind::Numeric:
      break;
  }
  throw std::invalid_argument("governing_part needs an exact mode");
}

namespace {

struct MassTerm {
  std::string field;
  Expression kinetic;
  Expression mass;
};

const std::vector<MassTerm>& mass_terms() {
  static const std::vector<MassTerm> terms = {
      {"Aem", parse("d[mu]Aem[nu] d[mu]Aem[nu]"), parse("Aem[mu] Aem[mu]")},
      {"Z", parse("d[mu]Z[nu] d[mu]Z[nu]"), parse("Z[mu] Z[mu]")},
      {"W+", parse("d[mu]W+[nu] d[mu]W-[nu]"), parse("W+[mu] W-[mu]")},
  };
  return terms;
}

}  // namespace

MassSpectrum extract_masses(const ModelConfig& cfg) {
  SubstitutionRules at_r{{"rho", {Expression(ComplexRational(cfg.R)), ""}}};
  const Expression lagrangian = substitute(build_L27(cfg).total, at_r);
  const JMode& mode = cfg.jmode;

  std::array<double, 3> m2{};
  std::array<std::optional<Rational>, 3> exact_m2;
  for (std::size_t k = 0; k < mass_terms().size(); ++k) {
    const MassTerm& term = mass_terms()[k];
    if (mode.exact()) {
      Expression part = governing_part(lagrangian, term.field, mode);
      ComplexRational kappa = coefficient_of(part, term.kinetic);
      ComplexRational mu = coefficient_of(part, term.mass);
      if (kappa.is_zero()) throw ParameterError("no kinetic term for " + term.field);
      ComplexRational value = -mu / kappa;
      if (!value.is_real()) throw ParameterError("complex squared mass for " + term.field);
      exact_m2[k] = value.re();
      m2[k] = value.re().get_d();
    } else {
      std::complex<double> kappa = 0.0;
      std::complex<double> mu = 0.0;
      for (const auto& [grade, part] : j_decompose(lagrangian)) {
        const double w = std::pow(mode.value(), grade);
        kappa += w * coefficient_of(part, term.kinetic).to_complex();
        mu += w * coefficient_of(part, term.mass).to_complex();
      }
      if (kappa == 0.0) throw ParameterError("no kinetic term for " + term.field);
      m2[k] = (-mu / kappa).real();
    }
  }

  MassSpectrum out;
  out.m_A = std::sqrt(std::max(0.0, m2[0]));
  out.m_Z = std::sqrt(std::max(0.0, m2[1]));
  out.m_W = std::sqrt(std::max(0.0, m2[2]));
  const double g = cfg.g.get_d();
  const double gp = cfg.gp.get_d();
  out.e_charge = g * gp / std::sqrt(g * g + gp * gp);
  out.cos_theta_W = out.m_Z > 0.0 ? out.m_W / out.m_Z : 0.0;
  out.m_A2 = exact_m2[0];
  out.m_Z2 = exact_m2[1];
  out.m_W2 = exact_m2[2];

  if (mode.exact() && cfg.exact) {
    MassSpectrum::Exact ex;
    if (rational_sqrt(*out.m_A2, ex.m_A) && rational_sqrt(*out.m_Z2, ex.m_Z) &&
        rational_sqrt(*out.m_W2, ex.m_W) && sgn(ex.m_Z) > 0) {
      ex.e_charge = cfg.e_charge();
      ex.cos_theta_W = ex.m_W / ex.m_Z;
      out.exact = ex;
    }
  }
  return out;
}

// ---- verification ------------------------------------------------------

VerificationReport verify_radial_identity(const ModelConfig& cfg) {
  VerificationReport report;
  report.check_name = "radial_identity";
  report.mode = "graded";
  ReportTimer timer(report);
  const NumericParams np = cfg.numeric();

  report.add(equality_check("matter Lagrangian in physical fields", physical_basis(build_matter_radial(), cfg),
                            build_eq25(cfg), cfg.exact, np, cfg.seed, report));

  // Matrix route: phi = rho h (1,0), d h = h X, W = h^+ A h + h^+ dh.
  const Expression lphi = build_Lphi();
  const Expression lrad = build_matter_radial();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> jdist(0.2, 1.0);
  const double g = np.g;
  SubCheck jet{"matrix route at random jets"};
  const int samples = std::min(cfg.samples, 50);
  for (int n = 0; n < samples; ++n) {
    const double j = jdist(rng);
    const NumericMatrix h = random_su2j_numeric(j, rng);
    const double rho = 0.5 + std::abs(normal(rng));
    MapAssignment original;
    MapAssignment radial;
    radial.set("rho", -1, rho);
    original.set("phi1", -1, rho * h(0, 0));
    original.set("phi2", -1, rho * h(1, 0) / j);
    double leak = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      const double drho = normal(rng);
      std::array<double, 3> x{normal(rng), normal(rng), normal(rng)};
      std::array<double, 3> a{normal(rng), normal(rng), normal(rng)};
      const double b = normal(rng);
      const NumericMatrix dh = h * su2_numeric(x, 1.0, j);
      const NumericMatrix w = adjoint(h) * su2_numeric(a, g, j) * h + su2_numeric(x, 1.0, j);
      const auto wc = su2_numeric_components(w, g, j);
      original.set("phi1", -1, drho * h(0, 0) + rho * dh(0, 0), {mu});
      original.set("phi2", -1, (drho * h(1, 0) + rho * dh(1, 0)) / j, {mu});
      radial.set("rho", -1, drho, {mu});
      for (int k = 0; k < 3; ++k) {
        original.set("A" + std::to_string(k + 1), mu, a[k]);
        radial.set("W" + std::to_string(k + 1), mu, wc[k].real());
        leak = std::max(leak, std::abs(wc[k].imag()));
      }
      original.set("B", mu, b);
      radial.set("B", mu, b);
    }
    const auto va = eval_numeric(lphi, original, np, j);
    const auto vb = eval_numeric(lrad, radial, np, j);
    const double gap = std::max(relative_gap(va, vb), leak);
    jet.max_abs_error = std::max(jet.max_abs_error, gap);
    if (gap > 1e-9 && jet.passed) {
      jet.passed = false;
      jet.note = "sample " + std::to_string(n) + ": relative gap " + std::to_string(gap);
    }
  }
  if (jet.passed) jet.note = std::to_string(samples) + " samples, tolerance 1e-9";
  report.add(jet);
  if (!report.passed) {
    for (const auto& d : report.details) {
      if (!d.passed) report.fail(d.name + ": " + d.note);
    }
  }
  return report;
}

VerificationReport verify_grading(const ModelConfig& cfg) {
  VerificationReport report;
  report.check_name = "grading";
  report.mode = "graded";
  ReportTimer timer(report);
  const NumericParams np = cfg.numeric();
  const Expression transformed = transformed_lagrangian(cfg);
  const L27Parts parts = build_L27(cfg);

  auto grades = j_decompose(transformed);
  for (const auto& [grade, part] : grades) {
    if (grade != 0 && grade != 2 && grade != 4) {
      report.add({"grade closure", false, 0.0, "unexpected grade " + std::to_string(grade)});
    }
  }
  report.add(equality_check("L_b", grades[0], parts.L_b, cfg.exact, np, cfg.seed, report));
  report.add(equality_check("L_f", grades[2], parts.L_f, cfg.exact, np, cfg.seed, report));
  report.add(equality_check("L_h", grades[4], parts.L_h, cfg.exact, np, cfg.seed, report));
  report.add(equality_check("total", transformed, parts.total, cfg.exact, np, cfg.seed, report));
  for (const auto& d : report.details) {
    if (!d.passed) report.fail(d.name + ": " + d.note);
  }
  return report;
}

SubstitutionRules su2_variation() { return su2_rules({true, true, true}, true); }

SubstitutionRules u1_variation() {
  const Expression omega = Expression::field("omega");
  const Expression half_igp = gp_sym() * Expression(iq(1, 2));
  SubstitutionRules rules;
  rules["phi1"] = {half_igp * omega * Expression::field("phi1"), ""};
  rules["phi2"] = {half_igp * omega * Expression::field("phi2"), ""};
  rules["B"] = {-Expression::field("omega", {}, {"h"}), "h"};
  return rules;
}

SubstitutionRules u1_variation_physical(const ModelConfig& cfg) {
  const Expression omega = Expression::field("omega");
  SubstitutionRules rules;
  rules["W+"] = {scale(omega * vec("W+", "h"), iq(-2)), "h"};
  rules["Aem"] = {scale(Expression::field("omega", {}, {"h"}), ComplexRational(2 / cfg.e_charge())),
                  "h"};
  return rules;
}

VerificationReport check_u1_invariance(const ModelConfig& cfg) {
  VerificationReport report;
  report.check_name = "u1_invariance";
  report.mode = "graded";
  ReportTimer timer(report);
  const NumericParams np = cfg.numeric();

  const Expression variation = vary(build_LA() + build_Lphi(), u1_variation());
  const Expression physical = vary(build_L27(cfg).total, u1_variation_physical(cfg));
  for (const JMode& mode : {JMode::one(), JMode::nilpotent()}) {
    report.add(zero_check("original fields, " + mode.name(), reduce(variation, mode), true, np,
                          cfg.seed));
    report.add(zero_check("physical fields, " + mode.name(), reduce(physical, mode), cfg.exact,
                          np, cfg.seed));
  }
  report.add(zero_check("original fields, all grades", variation, true, np, cfg.seed));
  report.add(zero_check("physical fields, all grades", physical, cfg.exact, np, cfg.seed));
  for (const auto& d : report.details) {
    if (d.note == "numeric oracle") {
      report.decision_path = DecisionPath::NumericOracle;
      report.tolerance = 1e-9;
    }
    if (!d.passed) report.fail(d.name + ": " + d.note);
  }
  return report;
}

namespace {

// Finite constant Omega applied to a random configuration; L_A + L_phi must
// not change.
SubCheck constant_omega_check(const Expression& lagrangian, double j, std::uint64_t seed,
                              int samples) {
  SubCheck check{"finite constant Omega"};
  const NumericParams np{3.0, 4.0, 2.0};
  std::mt19937_64 rng(seed);
  const std::vector<std::vector<int>> patterns = {{}, {0}, {1}, {2}, {3}};
  const int phi1 = field_id("phi1");
  const int phi2 = field_id("phi2");
  for (int n = 0; n < samples; ++n) {
    const NumericMatrix omega = random_su2j_numeric(j, rng);
    RandomAssignment base(seed * 7919ULL + static_cast<std::uint64_t>(n));
    MapAssignment before;
    MapAssignment after;
    for (const auto& d : patterns) {
      const auto p1 = base.value({phi1, false, -1, d});
      const auto p2 = base.value({phi2, false, -1, d});
      before.set("phi1", -1, p1, d);
      before.set("phi2", -1, p2, d);
      after.set("phi1", -1, omega(0, 0) * p1 + omega(0, 1) * j * p2, d);
      after.set("phi2", -1, (omega(1, 0) * p1 + omega(1, 1) * j * p2) / j, d);
      for (int mu = 0; mu < 4; ++mu) {
        std::array<double, 3> a{};
        for (int k = 0; k < 3; ++k) {
          a[k] = base.value({field_id("A" + std::to_string(k + 1)), false, mu, d}).real();
          before.set("A" + std::to_string(k + 1), mu, a[k], d);
        }
        const NumericMatrix rotated = omega * su2_numeric(a, np.g, j) * adjoint(omega);
        const auto comps = su2_numeric_components(rotated, np.g, j);
        for (int k = 0; k < 3; ++k) after.set("A" + std::to_string(k + 1), mu, comps[k].real(), d);
        const auto b = base.value({field_id("B"), false, mu, d});
        before.set("B", mu, b, d);
        after.set("B", mu, b, d);
      }
    }
    const double gap = relative_gap(eval_numeric(lagrangian, before, np, j),
                                    eval_numeric(lagrangian, after, np, j));
    check.max_abs_error = std::max(check.max_abs_error, gap);
    if (gap > 1e-9 && check.passed) {
      check.passed = false;
      check.note = "sample " + std::to_string(n) + ": relative gap " + std::to_string(gap);
    }
  }
  if (check.passed) check.note = std::to_string(samples) + " samples, tolerance 1e-9";
  return check;
}

}  // namespace

VerificationReport check_su2_invariance(const JMode& mode, std::uint64_t seed) {
  VerificationReport report;
  report.check_name = "su2_invariance";
  report.mode = mode.name();
  ReportTimer timer(report);
  const NumericParams np{3.0, 4.0, 2.0};
  const Expression lagrangian = build_LA() + build_Lphi();
  const Expression variation = vary(lagrangian, su2_variation());
  const Expression global_t3 =
      drop_parameter_gradients(vary(lagrangian, su2_rules({false, false, true}, false)));

  report.add(zero_check("first order, all grades", variation, true, np, seed));
  report.add(zero_check("constant T3 only", global_t3, true, np, seed));
  if (mode.exact()) {
    report.add(zero_check("first order, reduced", reduce(variation, mode), true, np, seed));
  } else {
    SubCheck at_eps{"first order at j = " + mode.name()};
    RandomAssignment a(seed);
    at_eps.max_abs_error = std::abs(eval_numeric(variation, a, np, mode.value()));
    at_eps.passed = at_eps.max_abs_error <= 1e-9;
    report.add(at_eps);
  }
  if (mode.kind() != JMode::Kind::Nilpotent && mode.value() > 0.0) {
    report.add(constant_omega_check(lagrangian, mode.value(), seed, 20));
    report.decision_path = DecisionPath::NumericOracle;
    report.tolerance = 1e-9;
  }
  for (const auto& d : report.details) {
    if (!d.passed) report.fail(d.name + ": " + d.note);
  }
  return report;
}

VerificationReport verify_trace_identity(int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  VerificationReport report;
  report.check_name = "trace_identity";
  report.mode = "1, iota, 0.001";
  report.decision_path = DecisionPath::NumericOracle;
  report.tolerance = 1e-10;
  ReportTimer timer(report);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 9);
  auto rational = [&] { return Rational(num(rng), den(rng)); };
  auto field_pairs = [&] {
    std::vector<GaugeMatrix> fs;
    for (int k = 0; k < 6; ++k) fs.push_back(lie_element(rational(), rational(), rational()));
    return fs;
  };

  for (const JMode& mode : {JMode::one(), JMode::nilpotent()}) {
    SubCheck check{"mode " + mode.name()};
    for (int n = 0; n < samples && check.passed; ++n) {
      const GaugeMatrix h = random_su2j_element(mode, rng);
      const GaugeMatrix hd = adjoint(h);
      ContractionScalar lhs;
      ContractionScalar rhs;
      // F antisymmetric: the sum over (mu, nu) is twice the sum over mu < nu.
      for (const auto& f : field_pairs()) {
        const GaugeMatrix w = mat_mul(mat_mul(hd, f, mode), h, mode);
        lhs += trace(mat_mul(f, f, mode)) * ContractionScalar(2);
        rhs += trace(mat_mul(w, w, mode)) * ContractionScalar(2);
      }
      if (!(lhs.reduce(mode) == rhs.reduce(mode))) {
        check.passed = false;
        check.note = "sample " + std::to_string(n) + ": " + to_string(lhs.reduce(mode)) +
                     " vs " + to_string(rhs.reduce(mode));
      }
    }
    if (check.passed) check.note = std::to_string(samples) + " samples, exact";
    report.add(check);
  }

  const double eps = 1e-3;
  SubCheck check{"mode 0.001"};
  for (int n = 0; n < samples; ++n) {
    const NumericMatrix h = random_su2j_numeric(eps, rng);
    std::complex<double> lhs = 0.0;
    std::complex<double> rhs = 0.0;
    for (const auto& f : field_pairs()) {
      const NumericMatrix fn = evaluate(f, eps);
      const NumericMatrix w = adjoint(h) * fn * h;
      lhs += 2.0 * trace(fn * fn);
      rhs += 2.0 * trace(w * w);
    }
    check.max_abs_error = std::max(check.max_abs_error, std::abs(lhs - rhs));
  }
  check.passed = check.max_abs_error <= report.tolerance;
  check.note = std::to_string(samples) + " samples, tolerance 1e-10";
  report.add(check);
  for (const auto& d : report.details) {
    if (!d.passed) report.fail(d.name + ": " + d.note);
  }
  return report;
}

}  // namespace cew
