#pragma once

#include <string>
#include <utility>

#include "fieldroad/monotone.hpp"
#include "fieldroad/road.hpp"

namespace fieldroad {

struct OuterOptions {
  double outer_tol = 1e-8;
  int max_outer = 500;
  IterationOptions inner;  // inner sup_tol should out-resolve outer_tol
};

/// Diagnostics of one outer bracket.
struct OuterReport {
  int sweeps = 0;
  double final_step = 0.0;
  double worst_monotonicity_violation = 0.0;  // signed, negative = violation
  double u_min = 0.0, u_max = 0.0;            // extremes over all iterates
  long inner_sweeps_total = 0;
  double inner_worst_violation = 0.0;
  double inner_box_min = 0.0, inner_box_max = 0.0;
};

struct CoupledSolution {
  RoadFunction u;
  FieldFunction v;
  OuterReport outer;
  double residual_field = 0.0;
  double residual_road = 0.0;
  std::string bracket;  // "lower" or "upper"
};

/// One outer step: maximal field solution for w = u, then the road solve fed
/// by its trace.
RoadFunction outer_T(const ModelParams& p, const Reaction& f, const Reaction& g,
                     const RoadFunction& u, const OuterOptions& opts = {});

/// Residual level a converged pair is held to:
/// 100 * inner sup_tol * coupled_residual_scale.
double coupled_residual_scale(const ModelParams& p, const Reaction& g,
                              double eta);

/// Two monotone outer brackets, from u = 0 (nondecreasing) and u = m
/// (nonincreasing), each run until the sup-step drops below outer_tol and
/// the pair (u, v) meets the residual contract. Inner solves warm-start from
/// the previous field iterate.
std::pair<CoupledSolution, CoupledSolution> solve_coupled(
    const ModelParams& p, const Reaction& f, const Reaction& g,
    const FieldGrid& grid, const OuterOptions& opts = {});

struct NontrivialFlags {
  bool v_nontrivial = false;
  bool u_nontrivial = false;
};

/// v is nontrivial when it dominates eps_bound * phi1 (pass eps_bound = 0 to
/// fall back to a plain sup test); u when its sup exceeds 100 * sup_tol.
NontrivialFlags nontriviality_check(const CoupledSolution& sol,
                                    double eps_bound, double sup_tol = 1e-10);

}  // namespace fieldroad
