#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morreyheat/verify.hpp"

namespace morreyheat::cli {

enum class Format { json, csv };

struct CliConfig {
  std::string command;  // norm, heat, verify-smoothing, verify-identity, counterexample, scan, embedding
  SpaceParams params;
  std::string space = "lebesgue";     // norm: lebesgue, weak, lorentz, local-morrey, morrey, global-morrey
  std::string target = "lebesgue";    // heat / verify-smoothing: lebesgue, weak, lorentz
  std::string input;                  // inline JSON or a file path
  std::optional<std::string> output;  // stdout when empty
  Format format = Format::json;
  std::vector<double> times;          // heat and verify-smoothing
  std::vector<double> gammas;         // scan
  std::vector<int> orders;            // counterexample
  int max_order = 6;
  std::optional<std::string> backend;
  bool force_quadrature = false;
  std::optional<std::string> thresholds;  // JSON object of overrides
  ExperimentOptions options;
  nlohmann::json resolved = nlohmann::json::object();  // echoed into the report
};

/// Exit status: 0 pass or computed, 1 verdict fail (or a numerical failure), 2 usage or input error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv (argv[0] is the program name). Throws CliUsageError.
CliConfig parse(const std::vector<std::string>& args);

struct CliUsageError {
  std::string message;
  int status = kExitUsage;  // 0 for --help
  std::string help;
};

int dispatch(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse + dispatch with the exit-code contract applied.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morreyheat::cli
