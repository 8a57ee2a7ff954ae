#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace renyiq {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitPass = 0,
  kExitError = 1,
  kExitToleranceFailure = 2,
};

/// Applies dotted key=value overrides ("tolerances.final_ratio=0.1",
/// "source.sigma=2") to a config object. Values are parsed as JSON when
/// possible and kept as strings otherwise.
void apply_overrides(nlohmann::json& config,
                     const std::vector<std::string>& overrides);

/// Full command-line entry point; writes human-readable output to `out` and
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace renyiq
