#pragma once

#include <stdexcept>
#include <string>

#include "fdflow/timeloop.hpp"

namespace fdflow {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse flat key=value text ('#' starts a comment, blank lines skipped).
/// Keys: n, dt, T, epsilon, beta, mu, delta_reg, cut_depth, solver_tol.
/// Absent keys keep RunConfig defaults. Throws ConfigError with the line
/// number on unknown keys, unparsable values, or invariant violations.
RunConfig parse_config(const std::string& text);

/// parse_config over a file's contents; file open failure is a ConfigError.
RunConfig parse_config_file(const std::string& path);

}  // namespace fdflow
