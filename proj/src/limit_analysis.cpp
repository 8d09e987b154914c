#include "cew/limit_analysis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cew {

namespace {

Expression at_radius(const Expression& e, const ModelConfig& cfg) {
  return substitute(e, {{"rho", {Expression(ComplexRational(cfg.R)), ""}}});
}

bool mentions_any(const Expression& e, std::initializer_list<const char*> fields) {
  auto symbols = field_symbols(e);
  for (const char* f : fields) {
    if (symbols.count(f)) return true;
  }
  return false;
}

void fold_failures(VerificationReport& report) {
  for (const auto& d : report.details) {
    if (!d.passed) report.fail(d.name + ": " + d.note);
  }
}

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs at least two matching points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line needs distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double residual = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (fit.slope * x[k] + fit.intercept);
    residual += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - residual / syy;
  return fit;
}

std::vector<double> default_j_values(int points) {
  if (points < 2) throw std::invalid_argument("need at least two sweep points");
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    out.push_back(std::pow(10.0, -1.0 - 2.0 * k / (points - 1)));
  }
  return out;
}

ScalingReport scaling_sweep(const std::vector<double>& j_values, int samples,
                            const ModelConfig& cfg, std::uint64_t seed) {
  if (samples < 10) throw std::invalid_argument("scaling_sweep needs at least 10 samples");
  if (j_values.size() < 2) throw std::invalid_argument("scaling_sweep needs two j values");
  for (std::size_t k = 0; k < j_values.size(); ++k) {
    if (!(j_values[k] > 0.0 && j_values[k] <= 1.0)) {
      throw std::invalid_argument("j values must lie in (0, 1]");
    }
    if (k > 0 && !(j_values[k] < j_values[k - 1])) {
      throw std::invalid_argument("j values must strictly decrease");
    }
  }

  const L27Parts parts = build_L27(cfg);
  const Expression lb = at_radius(parts.L_b, cfg);
  const Expression lf = at_radius(Expression::j(2) * parts.L_f, cfg);
  const Expression lh = at_radius(Expression::j(4) * parts.L_h, cfg);
  const NumericParams np = cfg.numeric();

  ScalingReport out;
  out.j_values = j_values;
  out.ratios_f.assign(j_values.size(), 0.0);
  out.ratios_h.assign(j_values.size(), 0.0);
  std::uint64_t draw = 0;
  for (int n = 0; n < samples; ++n) {
    while (true) {
      RandomAssignment fields(seed * 1000003ULL + draw++);
      // L_b carries no j; one evaluation serves every sweep point.
      const double base = std::abs(eval_numeric(lb, fields, np, 1.0));
      if (base < 1e-12) {
        ++out.degenerate_samples;
        continue;
      }
      for (std::size_t k = 0; k < j_values.size(); ++k) {
        out.ratios_f[k] += std::abs(eval_numeric(lf, fields, np, j_values[k])) / base;
        out.ratios_h[k] += std::abs(eval_numeric(lh, fields, np, j_values[k])) / base;
      }
      break;
    }
  }
  std::vector<double> lx, lf_log, lh_log;
  for (std::size_t k = 0; k < j_values.size(); ++k) {
    out.ratios_f[k] /= samples;
    out.ratios_h[k] /= samples;
    lx.push_back(std::log(j_values[k]));
    lf_log.push_back(std::log(out.ratios_f[k]));
    lh_log.push_back(std::log(out.ratios_h[k]));
  }
  LineFit ff = fit_line(lx, lf_log);
  LineFit fh = fit_line(lx, lh_log);
  out.slope_f = ff.slope;
  out.slope_h = fh.slope;
  out.r2_f = ff.r2;
  out.r2_h = fh.r2;
  out.fit_r2 = std::min(ff.r2, fh.r2);
  return out;
}

VerificationReport scaling_check(const ScalingReport& sweep) {
  VerificationReport report;
  report.check_name = "scaling_sweep";
  report.mode = "numeric";
  report.decision_path = DecisionPath::NumericOracle;
  report.tolerance = 0.01;
  auto slope = [](const char* name, double value, double expected, double tol) {
    std::ostringstream note;
    note << "slope " << value << ", expected " << expected << " +- " << tol;
    SubCheck c{name, std::abs(value - expected) <= tol, std::abs(value - expected), note.str()};
    return c;
  };
  report.add(slope("L_f slope", sweep.slope_f, 2.0, 0.01));
  report.add(slope("L_h slope", sweep.slope_h, 4.0, 0.02));
  std::ostringstream r2;
  r2 << "R^2 = " << sweep.fit_r2;
  report.add({"fit quality", sweep.fit_r2 >= 0.999, 0.0, r2.str()});
  fold_failures(report);
  return report;
}

Expression equation_of_motion(const ModelConfig& cfg, const std::string& field, const JMode& mode,
                              const std::string& idx) {
  const Expression lagrangian = at_radius(build_L27(cfg).total, cfg);
  const Expression eom = euler_lagrange(lagrangian, field, idx);
  switch (mode.kind()) {
    case JMode::Kind::One:
      return reduce(eom, mode);
    case JMode::Kind::Nilpotent: {
      auto grades = j_decompose(eom);
      return grades.empty() ? Expression() : grades.begin()->second;
    }
    case JMode::Kind::Numeric:
      break;
  }
  throw std::invalid_argument("equation_of_motion needs an exact mode");
}

VerificationReport decoupling_check(const ModelConfig& cfg) {
  VerificationReport report;
  report.check_name = "decoupling";
  report.mode = "iota vs 1";
  ReportTimer timer(report);
  const JMode iota = JMode::nilpotent();
  const JMode one = JMode::one();
  for (const char* base : {"Z", "Aem"}) {
    Expression contracted = equation_of_motion(cfg, base, iota);
    Expression full = equation_of_motion(cfg, base, one);
    const bool free_of_w = !mentions_any(contracted, {"W+", "W-"});
    report.add({std::string(base) + " equation under iota has no W", free_of_w, 0.0,
                free_of_w ? "" : "equation: " + contracted.to_string()});
    const bool coupled = mentions_any(full, {"W+", "W-"});
    report.add({std::string(base) + " equation at j=1 has W", coupled, 0.0,
                coupled ? "" : "equation: " + full.to_string()});
  }
  Expression fiber = equation_of_motion(cfg, "W+", iota);
  const bool external = mentions_any(fiber, {"Z", "Aem"});
  report.add({"W+ equation under iota has Z or Aem", external, 0.0,
              external ? "" : "equation: " + fiber.to_string()});
  fold_failures(report);
  return report;
}

ModelConfig random_pythagorean_config(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pick_m(2, 10);
  std::uniform_int_distribution<long> small(1, 7);
  const long m = pick_m(rng);
  const long n = std::uniform_int_distribution<long>(1, m - 1)(rng);
  Rational k(small(rng), small(rng));
  k.canonicalize();
  ModelConfig cfg;
  cfg.g = Rational(m * m - n * n) * k;
  cfg.gp = Rational(2 * m * n) * k;
  cfg.R = Rational(small(rng), small(rng));
  cfg.R.canonicalize();
  return cfg;
}

VerificationReport mass_invariance_check(const ModelConfig& cfg, int random_configs) {
  VerificationReport report;
  report.check_name = "mass_invariance";
  report.mode = "1 vs iota";
  ReportTimer timer(report);
  std::mt19937_64 rng(cfg.seed);
  std::vector<ModelConfig> configs{cfg};
  for (int k = 0; k < random_configs; ++k) configs.push_back(random_pythagorean_config(rng));

  SubCheck check{"spectra agree"};
  for (std::size_t k = 0; k < configs.size() && check.passed; ++k) {
    ModelConfig a = configs[k];
    ModelConfig b = configs[k];
    a.jmode = JMode::one();
    b.jmode = JMode::nilpotent();
    MassSpectrum ma = extract_masses(a);
    MassSpectrum mb = extract_masses(b);
    const bool same = ma.m_A2 == mb.m_A2 && ma.m_Z2 == mb.m_Z2 && ma.m_W2 == mb.m_W2 &&
                      ma.e_charge == mb.e_charge;
    if (!same) {
      check.passed = false;
      check.note = "config " + std::to_string(k) + " (g=" + to_string(a.g) +
                   ", gp=" + to_string(a.gp) + "): m_W^2 " + to_string(*ma.m_W2) + " vs " +
                   to_string(*mb.m_W2) + ", m_Z^2 " + to_string(*ma.m_Z2) + " vs " +
                   to_string(*mb.m_Z2);
    }
  }
  if (check.passed) check.note = std::to_string(configs.size()) + " configurations, exact";
  report.add(check);
  fold_failures(report);
  return report;
}

}  // namespace cew
