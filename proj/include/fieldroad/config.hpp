#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldroad/model.hpp"

namespace fieldroad {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReactionSpec {
  std::string name = "fisher";
  double scale = 1.0;
};

struct SolverBlock {
  double sup_tol = 1e-10;
  double outer_tol = 1e-8;
  double cg_tol = 1e-12;
  int max_sweeps = 10000;
};

struct GrowthBlock {
  double ell0 = 0.0;
  std::vector<double> ells;
};

/// Parsed and validated run configuration. Unknown keys anywhere in the
/// file are rejected.
struct RunConfig {
  ModelParams params;
  bool two_road = false;
  double Dsecond = 0.0;  // D'' (two-road only)
  double mu_p = 0.0;
  double nu_p = 0.0;
  ReactionSpec f, g, h;
  int nx = 64;
  int ny = 32;
  SolverBlock solver;
  std::optional<GrowthBlock> growth;
  std::filesystem::path out_dir = "out";
};

RunConfig load_config(const std::filesystem::path& path);

/// Thread cap for the per-domain solves of the growth study, from the
/// FIELDROAD_MAX_THREADS environment variable (default 1).
int max_threads_from_env();

}  // namespace fieldroad
