#include "cew/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cew/errors.hpp"
#include "cew/gauge_matrix.hpp"

namespace cew {

namespace {

using nlohmann::json;

/// Settings before defaults are applied; later sources override earlier.
struct RawConfig {
  std::optional<Rational> g, gp, R;
  std::optional<JMode> jmode;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<bool> exact;
};

Rational positive_rational(const std::string& key, const std::string& text) {
  Rational value;
  try {
    value = parse_rational(text);
  } catch (const std::exception&) {
    throw ConfigError(key, "'" + text + "' is not a number");
  }
  if (sgn(value) <= 0) throw ConfigError(key, "must be positive, got " + text);
  return value;
}

JMode parse_jmode(const std::string& key, const std::string& text) {
  try {
    return JMode::parse(text);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected 1, iota or a non-negative number, got '" + text + "'");
  }
}

// Numbers keep their shortest decimal spelling, so 0.652 becomes 163/250.
std::string scalar_text(const std::string& key, const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number()) return value.dump();
  throw ConfigError(key, "expected a number or string");
}

RawConfig raw_from_json(const json& doc) {
  RawConfig raw;
  if (doc.is_null()) return raw;
  if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "g") {
      raw.g = positive_rational(key, scalar_text(key, value));
    } else if (key == "gp") {
      raw.gp = positive_rational(key, scalar_text(key, value));
    } else if (key == "R") {
      raw.R = positive_rational(key, scalar_text(key, value));
    } else if (key == "jmode") {
      raw.jmode = parse_jmode(key, scalar_text(key, value));
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
      raw.seed = value.get<std::uint64_t>();
    } else if (key == "samples") {
      if (!value.is_number_integer() || value.get<long long>() < 1 ||
          value.get<long long>() > 100000000) {
        throw ConfigError(key, "expected a positive integer");
      }
      raw.samples = static_cast<int>(value.get<long long>());
    } else if (key == "exact") {
      if (!value.is_boolean()) throw ConfigError(key, "expected true or false");
      raw.exact = value.get<bool>();
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return raw;
}

void merge(RawConfig& base, const RawConfig& over) {
  if (over.g) base.g = over.g;
  if (over.gp) base.gp = over.gp;
  if (over.R) base.R = over.R;
  if (over.jmode) base.jmode = over.jmode;
  if (over.seed) base.seed = over.seed;
  if (over.samples) base.samples = over.samples;
  if (over.exact) base.exact = over.exact;
}

ModelConfig finalize(const RawConfig& raw) {
  ModelConfig cfg;
  if (raw.g) cfg.g = *raw.g;
  if (raw.gp) cfg.gp = *raw.gp;
  if (raw.R) cfg.R = *raw.R;
  if (raw.jmode) cfg.jmode = *raw.jmode;
  if (raw.seed) cfg.seed = *raw.seed;
  if (raw.samples) cfg.samples = *raw.samples;
  Rational root;
  const bool rational_s = rational_sqrt(cfg.g * cfg.g + cfg.gp * cfg.gp, root);
  cfg.exact = raw.exact.value_or(rational_s);
  if (cfg.exact && !rational_s) {
    throw ConfigError("exact", "sqrt(g^2 + gp^2) is irrational for g=" + to_string(cfg.g) +
                                   ", gp=" + to_string(cfg.gp));
  }
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("<config>", e.what());
  }
  return cfg;
}

RawConfig read_raw(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return raw_from_json(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---- output ------------------------------------------------------------

json summary(const std::vector<VerificationReport>& reports) {
  int passed = 0;
  for (const auto& r : reports) passed += r.passed ? 1 : 0;
  const int total = static_cast<int>(reports.size());
  return {{"total", total},
          {"passed", passed},
          {"failed", total - passed},
          {"status", passed == total ? "pass" : "fail"}};
}

std::string text_line(const VerificationReport& r, bool timings) {
  std::ostringstream line;
  line << (r.passed ? "PASS " : "FAIL ") << r.check_name << " [" << r.mode << "] "
       << to_string(r.decision_path) << " max_abs_error=" << r.max_abs_error;
  if (timings) line << " " << r.duration_ms << "ms";
  line << "\n";
  for (const auto& d : r.details) {
    line << "  " << (d.passed ? "ok   " : "fail ") << d.name;
    if (!d.note.empty()) line << ": " << d.note;
    line << "\n";
  }
  return line.str();
}

enum class Format { Json, Text, Csv };

struct Output {
  Format format = Format::Json;
  bool timings = false;
  std::string path;
};

void emit(const Output& o, const std::string& payload, std::ostream& out) {
  if (o.path.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(o.path);
  if (!file) throw ConfigError("--out", "cannot write " + o.path);
  file << payload;
}

std::string render_reports(const std::vector<VerificationReport>& reports, const Output& o) {
  if (o.format == Format::Text) {
    std::string text;
    for (const auto& r : reports) text += text_line(r, o.timings);
    json s = summary(reports);
    text += s["status"].get<std::string>() + ": " + std::to_string(s["passed"].get<int>()) + "/" +
            std::to_string(s["total"].get<int>()) + " checks passed\n";
    return text;
  }
  json list = json::array();
  for (const auto& r : reports) list.push_back(to_json(r, o.timings));
  json doc = {{"reports", list}, {"summary", summary(reports)}};
  return doc.dump(2) + "\n";
}

void report_config_error(const ConfigError& e, std::ostream& err) {
  if (e.key().starts_with("--")) {
    err << "error: " << e.key() << ": " << e.message() << "\n";
  } else {
    err << "error: " << e.what() << "\n";
  }
}

int exit_code(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    if (!r.passed) return 1;
  }
  return 0;
}

// ---- suites ------------------------------------------------------------

std::vector<VerificationReport> suite_group(const ModelConfig& cfg) {
  return {verify_commutators(cfg.jmode), verify_group(cfg.jmode, cfg.samples, cfg.seed)};
}

std::vector<VerificationReport> suite_lagrangian(const ModelConfig& cfg) {
  return {verify_radial_identity(cfg), verify_grading(cfg)};
}

std::vector<VerificationReport> suite_gauge(const ModelConfig& cfg) {
  return {check_su2_invariance(cfg.jmode, cfg.seed), check_u1_invariance(cfg)};
}

std::vector<VerificationReport> suite_trace(const ModelConfig& cfg) {
  return {verify_trace_identity(cfg.samples, cfg.seed)};
}

ScalingReport run_sweep(const ModelConfig& cfg) {
  return scaling_sweep(default_j_values(), std::max(10, std::min(cfg.samples, 100)), cfg,
                       cfg.seed);
}

std::vector<VerificationReport> suite_all(const ModelConfig& cfg) {
  std::vector<VerificationReport> out;
  for (auto suite : {suite_group, suite_lagrangian, suite_gauge, suite_trace}) {
    auto part = suite(cfg);
    out.insert(out.end(), part.begin(), part.end());
  }
  out.push_back(decoupling_check(cfg));
  out.push_back(mass_invariance_check(cfg));
  VerificationReport sweep;
  {
    ReportTimer timer(sweep);
    sweep = scaling_check(run_sweep(cfg));
  }
  out.push_back(sweep);
  return out;
}

}  // namespace

// ---- public ------------------------------------------------------------

ModelConfig parse_config(const std::string& text) { return finalize(read_raw(text)); }

ModelConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

json to_json(const VerificationReport& r, bool timings) {
  json details = json::array();
  for (const auto& d : r.details) {
    details.push_back({{"name", d.name},
                       {"status", d.passed ? "pass" : "fail"},
                       {"max_abs_error", d.max_abs_error},
                       {"note", d.note}});
  }
  json doc = {{"check_name", r.check_name},
              {"mode", r.mode},
              {"status", r.passed ? "pass" : "fail"},
              {"decision_path", to_string(r.decision_path)},
              {"max_abs_error", r.max_abs_error},
              {"tolerance", r.tolerance},
              {"witness", r.witness ? json(*r.witness) : json(nullptr)},
              {"details", details}};
  if (timings) doc["duration_ms"] = r.duration_ms;
  return doc;
}

json to_json(const ModelConfig& cfg) {
  return {{"g", to_string(cfg.g)},
          {"gp", to_string(cfg.gp)},
          {"R", to_string(cfg.R)},
          {"jmode", cfg.jmode.name()},
          {"seed", cfg.seed},
          {"samples", cfg.samples},
          {"exact", cfg.exact}};
}

json to_json(const MassSpectrum& m) {
  json doc = {{"m_W", m.m_W},
              {"m_Z", m.m_Z},
              {"m_A", m.m_A},
              {"e_charge", m.e_charge},
              {"cos_theta_W", m.cos_theta_W}};
  if (m.exact) {
    doc["exact"] = {{"m_W", to_string(m.exact->m_W)},
                    {"m_Z", to_string(m.exact->m_Z)},
                    {"m_A", to_string(m.exact->m_A)},
                    {"e_charge", to_string(m.exact->e_charge)},
                    {"cos_theta_W", to_string(m.exact->cos_theta_W)}};
  }
  return doc;
}

json to_json(const ScalingReport& s) {
  return {{"j_values", s.j_values},
          {"ratios_f", s.ratios_f},
          {"ratios_h", s.ratios_h},
          {"slope_f", s.slope_f},
          {"slope_h", s.slope_h},
          {"r2_f", s.r2_f},
          {"r2_h", s.r2_h},
          {"fit_r2", s.fit_r2},
          {"degenerate_samples", s.degenerate_samples}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contracted electroweak model verifier"};
  app.name("cew");
  app.require_subcommand(1);

  std::string j_text, g_text, gp_text, r_text, config_path, format_text = "json";
  std::uint64_t seed = 0;
  int samples = 0;
  Output output;
  app.add_option("--j", j_text, "contraction parameter: 1, iota or a number >= 0");
  app.add_option("--g", g_text, "SU(2) coupling");
  app.add_option("--gp", gp_text, "U(1) coupling");
  app.add_option("--R", r_text, "sphere radius");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--samples", samples, "samples per randomized check")->check(CLI::PositiveNumber);
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", output.path, "write the report to a file");
  app.add_option("--format", format_text, "json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_flag("--timings", output.timings, "include duration_ms in reports");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run verification suites")->fallthrough();
  verify->add_option("suite", suite, "group, lagrangian, gauge, trace or all")
      ->check(CLI::IsMember({"group", "lagrangian", "gauge", "trace", "all"}));
  auto* masses = app.add_subcommand("masses", "vector boson mass spectrum")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "j-scaling of the graded Lagrangian")->fallthrough();
  auto* eom = app.add_subcommand("eom", "equations of motion and decoupling")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  ModelConfig cfg;
  try {
    RawConfig raw;
    if (!config_path.empty()) merge(raw, read_raw(read_file(config_path)));
    RawConfig flags;
    if (!j_text.empty()) flags.jmode = parse_jmode("--j", j_text);
    if (!g_text.empty()) flags.g = positive_rational("--g", g_text);
    if (!gp_text.empty()) flags.gp = positive_rational("--gp", gp_text);
    if (!r_text.empty()) flags.R = positive_rational("--R", r_text);
    if (app.count("--seed")) flags.seed = seed;
    if (app.count("--samples")) flags.samples = samples;
    // New couplings decide exactness afresh unless the file pinned it.
    merge(raw, flags);
    cfg = finalize(raw);
  } catch (const ConfigError& e) {
    report_config_error(e, err);
    return 2;
  }
  output.format = format_text == "text" ? Format::Text
                  : format_text == "csv" ? Format::Csv
                                         : Format::Json;
  if (output.format == Format::Csv && !sweep->parsed()) {
    err << "error: --format csv is only available for sweep\n";
    return 2;
  }

  try {
    if (verify->parsed()) {
      std::vector<VerificationReport> reports;
      if (suite == "group") reports = suite_group(cfg);
      if (suite == "lagrangian") reports = suite_lagrangian(cfg);
      if (suite == "gauge") reports = suite_gauge(cfg);
      if (suite == "trace") reports = suite_trace(cfg);
      if (suite == "all") reports = suite_all(cfg);
      emit(output, render_reports(reports, output), out);
      return exit_code(reports);
    }
    if (masses->parsed()) {
      MassSpectrum m = extract_masses(cfg);
      if (output.format == Format::Text) {
        std::ostringstream text;
        text << "m_W = " << m.m_W << "\nm_Z = " << m.m_Z << "\nm_A = " << m.m_A
             << "\ne = " << m.e_charge << "\ncos theta_W = " << m.cos_theta_W << "\n";
        emit(output, text.str(), out);
      } else {
        json doc = {{"config", to_json(cfg)}, {"masses", to_json(m)}};
        emit(output, doc.dump(2) + "\n", out);
      }
      return 0;
    }
    if (sweep->parsed()) {
      ScalingReport s = run_sweep(cfg);
      VerificationReport check = scaling_check(s);
      if (output.format == Format::Csv) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "j,ratio_f,ratio_h\n";
        for (std::size_t k = 0; k < s.j_values.size(); ++k) {
          csv << s.j_values[k] << "," << s.ratios_f[k] << "," << s.ratios_h[k] << "\n";
        }
        emit(output, csv.str(), out);
      } else if (output.format == Format::Text) {
        std::ostringstream text;
        text << "j ratio_f ratio_h\n";
        for (std::size_t k = 0; k < s.j_values.size(); ++k) {
          text << s.j_values[k] << " " << s.ratios_f[k] << " " << s.ratios_h[k] << "\n";
        }
        emit(output, text.str() + render_reports({check}, output), out);
      } else {
        json doc = {{"sweep", to_json(s)}, {"reports", json::array({to_json(check, output.timings)})},
                    {"summary", summary({check})}};
        emit(output, doc.dump(2) + "\n", out);
      }
      return exit_code({check});
    }
    if (eom->parsed()) {
      if (!cfg.jmode.exact()) {
        err << "error: --j: equations of motion need j = 1 or iota\n";
        return 2;
      }
      json equations = json::object();
      std::string text;
      for (const char* field : {"Z", "Aem", "W+"}) {
        std::string e = equation_of_motion(cfg, field, cfg.jmode).to_string();
        equations[field] = e;
        text += std::string(field) + ": " + e + " = 0\n";
      }
      std::vector<VerificationReport> reports{decoupling_check(cfg)};
      if (output.format == Format::Text) {
        emit(output, text + render_reports(reports, output), out);
      } else {
        json list = json::array({to_json(reports.front(), output.timings)});
        json doc = {{"mode", cfg.jmode.name()},
                    {"equations", equations},
                    {"reports", list},
                    {"summary", summary(reports)}};
        emit(output, doc.dump(2) + "\n", out);
      }
      return exit_code(reports);
    }
  } catch (const ConfigError& e) {
    report_config_error(e, err);
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cew
