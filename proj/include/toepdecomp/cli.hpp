#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "toepdecomp/decomposition.hpp"
#include "toepdecomp/tolerances.hpp"

namespace toepdecomp::cli {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoResult = 2;

struct JobConfig {
  Tolerances tol;
  Mode mode = Mode::all();
  bool verbose = false;
};

// Values set on the command line or through TOEPDECOMP_TOL_* / TOEPDECOMP_MODE.
// Unset fields fall back to the input document, then to the defaults.
struct Overrides {
  std::optional<double> cluster, rank, root, residual;
  std::optional<Mode> mode;
  bool verbose = false;

  void apply(JobConfig& cfg) const;
};

Overrides overrides_from_env();
Mode parse_mode(const std::string& text, std::optional<int> index = std::nullopt);
std::string mode_name(Mode mode);

struct CommandOutput {
  nlohmann::json doc;
  int exit_code = kExitSuccess;
};

nlohmann::json error_document(const std::string& kind, const std::string& message);

// Folds the optional "tol", "c0_mode" and "l" fields of an input document
// into cfg, then lets the overrides win.
JobConfig resolve_config(const nlohmann::json& input, const Overrides& overrides);

CommandOutput cmd_decompose(const nlohmann::json& input, const JobConfig& cfg);
CommandOutput cmd_check_roots(const nlohmann::json& input, const JobConfig& cfg);
CommandOutput cmd_demo(const JobConfig& cfg);

int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace toepdecomp::cli
