#include "cew/gauge_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cew/errors.hpp"

namespace cew {
namespace {

const ComplexRational kHalfI{Rational(0), Rational(1, 2)};

void require_exact(const JMode& mode, const char* what) {
  if (!mode.exact()) {
    throw std::invalid_argument(std::string(what) + " needs an exact mode (1 or iota)");
  }
}

Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

ComplexRational random_complex(std::mt19937_64& rng, int max_num, int max_den) {
  return {random_rational(rng, max_num, max_den), random_rational(rng, max_num, max_den)};
}

// Inverse stereographic projection of a random rational point of Q^3 onto S^3.
std::pair<ComplexRational, ComplexRational> random_unit_quaternion(std::mt19937_64& rng) {
  Rational p1 = random_rational(rng, 6, 5);
  Rational p2 = random_rational(rng, 6, 5);
  Rational p3 = random_rational(rng, 6, 5);
  Rational q = p1 * p1 + p2 * p2 + p3 * p3;
  Rational d = q + 1;
  return {ComplexRational((q - 1) / d, 2 * p1 / d), ComplexRational(2 * p2 / d, 2 * p3 / d)};
}

ComplexRational random_phase(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> dist(1, 12);
  long m = dist(rng);
  long n = dist(rng);
  if (m == n) ++m;
  ComplexRational z = pythagorean_phase(m, n);
  return (rng() & 1U) ? z : z.conj();
}

bool is_identity(const GaugeMatrix& x) { return x == GaugeMatrix::identity(); }

// Shape [[a, j b], [-j conj(b), conj(a)]] up to the mode's reduction.
bool has_su2j_shape(const GaugeMatrix& x, const JMode& mode) {
  if (!(x(1, 1) == x(0, 0).conj())) return false;
  if (!(x(1, 0) == -x(0, 1).conj())) return false;
  if (mode.kind() == JMode::Kind::Nilpotent) {
    return x(0, 1).coefficient(0).is_zero();
  }
  return true;
}

}  // namespace

GaugeMatrix reduce(const GaugeMatrix& x, const JMode& mode) {
  require_exact(mode, "matrix reduction");
  GaugeMatrix out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = x(r, c).reduce(mode);
  return out;
}

NumericMatrix evaluate(const GaugeMatrix& x, double j) {
  NumericMatrix out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = x(r, c).evaluate(j);
  return out;
}

double max_abs_difference(const NumericMatrix& a, const NumericMatrix& b) {
  double worst = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

GaugeMatrix su2j_element(const ComplexRational& alpha, const ComplexRational& beta,
                         const JMode& mode) {
  ContractionScalar det = ContractionScalar(alpha.norm()) + ContractionScalar(beta.norm()).times_j(2);
  if (mode.exact()) {
    if (!(det.reduce(mode) == ContractionScalar(1))) {
      throw NotUnimodular("|alpha|^2 + j^2 |beta|^2 = " + to_string(det.reduce(mode)) +
                          " in mode " + mode.name());
    }
  } else if (std::abs(det.evaluate(mode.value()) - 1.0) > 1e-12) {
    throw NotUnimodular("|alpha|^2 + j^2 |beta|^2 differs from 1 in mode " + mode.name());
  }
  GaugeMatrix out;
  out(0, 0) = alpha;
  out(0, 1) = ContractionScalar(beta).times_j();
  out(1, 0) = (-ContractionScalar(beta.conj())).times_j();
  out(1, 1) = alpha.conj();
  return out;
}

NumericMatrix su2j_element_numeric(std::complex<double> alpha, std::complex<double> beta,
                                   double eps) {
  double det = std::norm(alpha) + eps * eps * std::norm(beta);
  if (std::abs(det - 1.0) > 1e-12) throw NotUnimodular("numeric element is not unimodular");
  NumericMatrix out;
  out(0, 0) = alpha;
  out(0, 1) = eps * beta;
  out(1, 0) = -eps * std::conj(beta);
  out(1, 1) = std::conj(alpha);
  return out;
}

GaugeMatrix generator(int k) {
  GaugeMatrix out = GaugeMatrix::diag(ContractionScalar(), ContractionScalar());
  const ContractionScalar half_i(kHalfI);
  switch (k) {
    case 1:
      out(0, 1) = half_i.times_j();
      out(1, 0) = half_i.times_j();
      break;
    case 2:
      // (i/2) [[0, -i], [i, 0]] = [[0, 1/2], [-1/2, 0]]
      out(0, 1) = ContractionScalar::make(Rational(1, 2), 0, 1);
      out(1, 0) = ContractionScalar::make(Rational(-1, 2), 0, 1);
      break;
    case 3:
      out(0, 0) = half_i;
      out(1, 1) = -half_i;
      break;
    default:
      throw std::invalid_argument("generator index must be 1, 2 or 3");
  }
  return out;
}

GaugeMatrix lie_element(const Rational& a1, const Rational& a2, const Rational& a3) {
  return ContractionScalar(ComplexRational(a1)) * generator(1) +
         ContractionScalar(ComplexRational(a2)) * generator(2) +
         ContractionScalar(ComplexRational(a3)) * generator(3);
}

GaugeMatrix hypercharge() {
  return GaugeMatrix::diag(ContractionScalar(kHalfI), ContractionScalar(kHalfI));
}

GaugeMatrix charge() { return hypercharge() + generator(3); }

GaugeMatrix mat_mul(const GaugeMatrix& x, const GaugeMatrix& y, const JMode& mode) {
  return reduce(x * y, mode);
}

GaugeMatrix commutator(const GaugeMatrix& x, const GaugeMatrix& y, const JMode& mode) {
  return reduce(commutator(x, y), mode);
}

NumericMatrix u1_element(double beta) {
  auto p = std::polar(1.0, beta / 2.0);
  return NumericMatrix::diag(p, p);
}

NumericMatrix u1em_element(double gamma) {
  return NumericMatrix::diag(std::polar(1.0, gamma), 1.0);
}

GaugeMatrix u1_element(const ComplexRational& half_phase) {
  if (half_phase.norm() != 1) throw std::invalid_argument("U(1) phase must have modulus 1");
  return GaugeMatrix::diag(half_phase, half_phase);
}

GaugeMatrix u1em_element(const ComplexRational& phase) {
  if (phase.norm() != 1) throw std::invalid_argument("U(1)_em phase must have modulus 1");
  return GaugeMatrix::diag(phase, ContractionScalar(1));
}

DoubletState apply(const GaugeMatrix& m, const DoubletState& phi) {
  ContractionScalar lower = phi.phi2.times_j();
  ContractionScalar top = m(0, 0) * phi.phi1 + m(0, 1) * lower;
  ContractionScalar bottom = m(1, 0) * phi.phi1 + m(1, 1) * lower;
  return {top, bottom.div_j()};
}

ContractionScalar hermitian_form(const DoubletState& phi, const JMode& mode) {
  ContractionScalar form = phi.phi1.conj() * phi.phi1 + (phi.phi2.conj() * phi.phi2).times_j(2);
  return form.reduce(mode);
}

ComplexRational pythagorean_phase(long m, long n) {
  Rational d(m * m + n * n);
  if (sgn(d) == 0) throw std::invalid_argument("degenerate Pythagorean parameters");
  return {Rational(m * m - n * n) / d, Rational(2 * m * n) / d};
}

VerificationReport verify_commutators(const JMode& mode) {
  VerificationReport report;
  ReportTimer timer(report);
  report.check_name = "commutator_table";
  report.mode = mode.name();
  const GaugeMatrix t1 = generator(1), t2 = generator(2), t3 = generator(3);
  const ContractionScalar j2 = ContractionScalar::make(1, 0, 2);
  struct Row {
    const char* name;
    GaugeMatrix lhs;
    GaugeMatrix rhs;
  };
  const Row rows[] = {
      {"[T1,T2] = -j^2 T3", commutator(t1, t2), -j2 * t3},
      {"[T3,T1] = -T2", commutator(t3, t1), ContractionScalar(-1) * t2},
      {"[T2,T3] = -T1", commutator(t2, t3), ContractionScalar(-1) * t1},
  };
  for (const auto& row : rows) {
    SubCheck check{row.name};
    if (mode.exact()) {
      check.passed = reduce(row.lhs, mode) == reduce(row.rhs, mode);
    } else {
      report.decision_path = DecisionPath::NumericOracle;
      report.tolerance = 1e-12;
      check.max_abs_error =
          max_abs_difference(evaluate(row.lhs, mode.value()), evaluate(row.rhs, mode.value()));
      check.passed = check.max_abs_error <= 1e-12;
    }
    report.add(check);
  }
  if (mode.kind() == JMode::Kind::Nilpotent) {
    SubCheck check{"[T1,T2] = 0 under iota^2 = 0"};
    check.passed = reduce(commutator(t1, t2), mode) ==
                   GaugeMatrix::diag(ContractionScalar(), ContractionScalar());
    report.add(check);
  }
  if (!report.passed) report.fail("commutator table mismatch");
  return report;
}

GaugeMatrix random_su2j_element(const JMode& mode, std::mt19937_64& rng) {
  require_exact(mode, "exact sampling");
  if (mode.kind() == JMode::Kind::One) {
    auto [a, b] = random_unit_quaternion(rng);
    return su2j_element(a, b, mode);
  }
  return su2j_element(random_phase(rng), random_complex(rng, 5, 1 + static_cast<int>(rng() % 4)),
                      mode);
}

NumericMatrix random_su2j_numeric(double eps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> box(-5.0, 5.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::complex<double> beta(box(rng), box(rng));
  double bound = eps * std::abs(beta);
  if (bound >= 0.9) beta *= 0.9 / bound;
  double a = std::sqrt(1.0 - eps * eps * std::norm(beta));
  return su2j_element_numeric(std::polar(a, angle(rng)), beta, eps);
}

namespace {

void verify_group_exact(const JMode& mode, int samples, std::mt19937_64& rng,
                        VerificationReport& report) {
  SubCheck det{"determinant"}, unitary{"unitarity"}, closure{"closure"},
      form{"hermitian_form_invariance"}, anti{"lie_anti_hermiticity"};
  if (mode.kind() == JMode::Kind::Nilpotent) {
    form.note = "beta sampled from the rational box [-5,5]^2";
  }
  auto sample = [&]() { return random_su2j_element(mode, rng); };
  for (int s = 0; s < samples; ++s) {
    GaugeMatrix omega = sample();
    GaugeMatrix other = sample();
    GaugeMatrix reduced = reduce(omega, mode);
    if (!(determinant(reduced).reduce(mode) == ContractionScalar(1))) det.passed = false;
    if (!is_identity(mat_mul(omega, adjoint(omega), mode)) ||
        !is_identity(mat_mul(adjoint(omega), omega, mode))) {
      unitary.passed = false;
    }
    GaugeMatrix product = mat_mul(omega, other, mode);
    if (!has_su2j_shape(product, mode) ||
        !(determinant(product).reduce(mode) == ContractionScalar(1)) ||
        !is_identity(mat_mul(product, adjoint(product), mode))) {
      closure.passed = false;
    }
    DoubletState phi{random_complex(rng, 9, 7), random_complex(rng, 9, 7)};
    if (!(hermitian_form(apply(omega, phi), mode) == hermitian_form(phi, mode))) {
      form.passed = false;
    }
    GaugeMatrix t = lie_element(random_rational(rng, 9, 9), random_rational(rng, 9, 9),
                                random_rational(rng, 9, 9));
    if (!(t + adjoint(t) == GaugeMatrix::diag(ContractionScalar(), ContractionScalar()))) {
      anti.passed = false;
    }
  }
  for (auto* c : {&det, &unitary, &closure, &form, &anti}) report.add(*c);
}

void verify_group_numeric(double eps, int samples, std::mt19937_64& rng,
                          VerificationReport& report) {
  report.decision_path = DecisionPath::NumericOracle;
  report.tolerance = 1e-12;
  std::uniform_real_distribution<double> box(-5.0, 5.0);
  auto sample = [&]() { return random_su2j_numeric(eps, rng); };
  SubCheck det{"determinant"}, unitary{"unitarity"}, closure{"closure"},
      form{"hermitian_form_invariance"}, anti{"lie_anti_hermiticity"};
  const NumericMatrix id = NumericMatrix::identity();
  auto track = [](SubCheck& c, double err) { c.max_abs_error = std::max(c.max_abs_error, err); };
  for (int s = 0; s < samples; ++s) {
    NumericMatrix omega = sample();
    NumericMatrix other = sample();
    track(det, std::abs(determinant(omega) - 1.0));
    track(unitary, max_abs_difference(omega * adjoint(omega), id));
    NumericMatrix product = omega * other;
    track(closure, std::max({std::abs(determinant(product) - 1.0),
                             max_abs_difference(product * adjoint(product), id),
                             std::abs(product(1, 1) - std::conj(product(0, 0))),
                             std::abs(product(1, 0) + std::conj(product(0, 1)))}));
    std::complex<double> p1(box(rng), box(rng)), p2(box(rng), box(rng));
    double before = std::norm(p1) + eps * eps * std::norm(p2);
    std::complex<double> top = omega(0, 0) * p1 + omega(0, 1) * (eps * p2);
    std::complex<double> bottom = omega(1, 0) * p1 + omega(1, 1) * (eps * p2);
    double after = std::norm(top) + std::norm(bottom);
    track(form, std::abs(after - before) / std::max(1.0, before));
    GaugeMatrix t = lie_element(random_rational(rng, 9, 9), random_rational(rng, 9, 9),
                                random_rational(rng, 9, 9));
    NumericMatrix tn = evaluate(t, eps);
    track(anti, max_abs_difference(tn + adjoint(tn), NumericMatrix::diag(0.0, 0.0)));
  }
  for (auto* c : {&det, &unitary, &closure, &form, &anti}) {
    c->passed = c->max_abs_error <= 1e-12;
    report.add(*c);
  }
}

}  // namespace

VerificationReport verify_group(const JMode& mode, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify_group needs samples >= 1");
  VerificationReport report;
  ReportTimer timer(report);
  report.check_name = "group_axioms";
  report.mode = mode.name();
  std::mt19937_64 rng(seed);
  if (mode.exact()) {
    verify_group_exact(mode, samples, rng, report);
  } else {
    verify_group_numeric(mode.value(), samples, rng, report);
  }
  if (!report.passed) {
    for (const auto& d : report.details) {
      if (!d.passed) report.fail("failed sub-check: " + d.name);
    }
  }
  return report;
}

}  // namespace cew
