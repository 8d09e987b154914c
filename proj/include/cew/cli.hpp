#pragma once

// Command-line front end: configuration loading, suite dispatch and report
// serialization.
//
//   cew verify {group|lagrangian|gauge|trace|all}
//   cew masses | sweep | eom
//
// with --j, --g, --gp, --R, --seed, --samples, --config, --out, --format
// and --timings. Exit status: 0 all checks pass, 1 a check failed, 2 usage
// or configuration error.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cew/electroweak_model.hpp"
#include "cew/limit_analysis.hpp"
#include "cew/report.hpp"

namespace cew {

/// Reads a JSON object with keys g, gp, R, jmode, seed, samples, exact.
/// An empty file yields the defaults. Throws ConfigError naming the key.
ModelConfig load_config(const std::string& path);
/// Same, from JSON text.
ModelConfig parse_config(const std::string& text);

/// duration_ms is written only when `timings` is set so that identical
/// runs produce identical bytes.
nlohmann::json to_json(const VerificationReport& report, bool timings = false);
nlohmann::json to_json(const ModelConfig& cfg);
nlohmann::json to_json(const MassSpectrum& masses);
nlohmann::json to_json(const ScalingReport& sweep);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cew
