#pragma once

#include <string>

#include "fieldroad/config.hpp"

namespace fieldroad {

/// Subcommand bodies behind the executable. Exit codes: 0 success,
/// 2 assumption/config validation failure, 3 solver non-convergence or a
/// failed numerical check.
int run_solve(const RunConfig& cfg);
int run_eigen(double ell, double L, int nx, int ny, double D,
              const std::string& f_name);
int run_grow(const RunConfig& cfg);
int run_validate(const RunConfig& cfg);
int run_field_only(const RunConfig& cfg, const std::string& w_spec);

}  // namespace fieldroad
