#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"

#include "cew/cli.hpp"
#include "cew/errors.hpp"

using namespace cew;
using nlohmann::json;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("cew_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
    std::ofstream(path) << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cew");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("configuration files") {
  TempFile empty("");
  ModelConfig d = load_config(empty.path.string());
  CHECK(d.g == 3);
  CHECK(d.gp == 4);
  CHECK(d.R == 2);
  CHECK(d.jmode == JMode::nilpotent());
  CHECK(d.seed == 42);
  CHECK(d.samples == 1000);
  CHECK(d.exact);

  TempFile custom(R"({"g": 5, "gp": "12", "R": "3/2", "jmode": "0.01", "seed": 7, "samples": 20})");
  ModelConfig c = load_config(custom.path.string());
  CHECK(c.g == 5);
  CHECK(c.gp == 12);
  CHECK(c.R == Rational(3, 2));
  CHECK(c.jmode.kind() == JMode::Kind::Numeric);
  CHECK(c.jmode.value() == 0.01);
  CHECK(c.seed == 7);
  CHECK(c.samples == 20);

  // An irrational weak mixing leaves exact arithmetic off unless forced.
  ModelConfig f = parse_config(R"({"g": 0.652, "gp": 0.357})");
  CHECK(f.g == Rational(163, 250));
  CHECK_FALSE(f.exact);

  CHECK(config_error_key(R"({"g": -1})") == "g");
  CHECK(config_error_key(R"({"gp": 0})") == "gp");
  CHECK(config_error_key(R"({"R": "x"})") == "R");
  CHECK(config_error_key(R"({"jmode": "kappa"})") == "jmode");
  CHECK(config_error_key(R"({"samples": 0})") == "samples");
  CHECK(config_error_key(R"({"seed": -3})") == "seed");
  CHECK(config_error_key(R"({"colour": 1})") == "colour");
  CHECK(config_error_key(R"({"g": 0.652, "gp": 0.357, "exact": true})") == "exact");
  CHECK(config_error_key("[1, 2]") == "<root>");
  CHECK(config_error_key("{") == "<root>");
  CHECK_THROWS_AS(load_config("/nonexistent/cew.json"), ConfigError);
}

TEST_CASE("masses command") {
  Result r = invoke({"masses", "--g", "3", "--gp", "4", "--R", "2"});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["masses"]["m_W"].get<double>() == 3.0);
  CHECK(doc["masses"]["m_Z"].get<double>() == 5.0);
  CHECK(doc["masses"]["m_A"].get<double>() == 0.0);
  CHECK(doc["masses"]["exact"]["e_charge"] == "12/5");
  CHECK(doc["masses"]["exact"]["cos_theta_W"] == "3/5");
  CHECK(doc["config"]["jmode"] == "iota");

  Result text = invoke({"masses", "--format", "text", "--j", "1"});
  CHECK(text.code == 0);
  CHECK(text.out.find("m_Z = 5") != std::string::npos);
}

TEST_CASE("flags override the configuration file") {
  TempFile file(R"({"g": 5, "gp": 12, "R": 2})");
  Result r = invoke({"masses", "--config", file.path.string(), "--R", "4"});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["config"]["g"] == "5");
  CHECK(doc["config"]["R"] == "4");
  // m_W = g R / 2
  CHECK(doc["masses"]["exact"]["m_W"] == "10");
}

TEST_CASE("verify command") {
  Result r = invoke({"verify", "group", "--j", "iota", "--samples", "50"});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["summary"]["status"] == "pass");
  CHECK(doc["summary"]["failed"] == 0);
  CHECK(doc["reports"].size() == 2);
  for (const auto& report : doc["reports"]) CHECK_FALSE(report.contains("duration_ms"));

  Result timed = invoke({"verify", "trace", "--samples", "20", "--timings"});
  CHECK(timed.code == 0);
  CHECK(json::parse(timed.out)["reports"][0].contains("duration_ms"));

  Result text = invoke({"verify", "group", "--j", "1", "--samples", "20", "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("PASS") != std::string::npos);
  CHECK(text.out.find("FAIL") == std::string::npos);
}

TEST_CASE("identical runs produce identical output") {
  std::vector<std::string> args{"verify", "gauge", "--seed", "11", "--samples", "30"};
  Result a = invoke(args);
  Result b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("sweep command") {
  Result csv = invoke({"sweep", "--samples", "20", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("j,ratio_f,ratio_h\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 6);

  Result doc = invoke({"sweep", "--samples", "20"});
  CHECK(doc.code == 0);
  json parsed = json::parse(doc.out);
  CHECK(parsed["sweep"]["slope_f"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("out writes to a file") {
  TempFile target("");
  Result r = invoke({"masses", "--out", target.path.string()});
  CHECK(r.code == 0);
  std::ifstream in(target.path);
  json doc = json::parse(in);
  CHECK(doc["masses"]["m_Z"].get<double>() == 5.0);
}

TEST_CASE("usage and configuration errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"verify", "everything"}).code == 2);
  CHECK(invoke({"masses", "--format", "xml"}).code == 2);
  CHECK(invoke({"masses", "--format", "csv"}).code == 2);
  CHECK(invoke({"masses", "--samples", "0"}).code == 2);
  CHECK(invoke({"masses", "--j", "-0.5"}).code == 2);
  CHECK(invoke({"eom", "--j", "0.1"}).code == 2);

  Result bad = invoke({"masses", "--g", "-1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--g") != std::string::npos);

  TempFile file(R"({"gp": "abc"})");
  Result from_file = invoke({"masses", "--config", file.path.string()});
  CHECK(from_file.code == 2);
  CHECK(from_file.err.find("'gp'") != std::string::npos);
}

TEST_CASE("eom command") {
  Result r = invoke({"eom"});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["mode"] == "iota");
  CHECK(doc["equations"].contains("Z"));
  CHECK(doc["equations"]["Z"].get<std::string>().find("W") == std::string::npos);
  CHECK(doc["summary"]["status"] == "pass");
}
