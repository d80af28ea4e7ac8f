#pragma once

#include <filesystem>
#include <utility>

#include "fieldroad/field.hpp"

namespace fieldroad {

struct IterationOptions {
  double sup_tol = 1e-10;
  int max_sweeps = 10000;
  bool record_history = false;  // keep full iterates, not just stats
  SolveOptions linear;
};

struct SweepStat {
  double sup_step = 0.0;       // sup |y_n - y_{n-1}|
  double min_violation = 0.0;  // signed monotone step: min over nodes in the
                               // expected direction; negative = violation
  double residual = 0.0;       // semilinear residual of the iterate
};

/// Diagnostics of one bracketed run. A clean run keeps worst_violation and
/// worst_cross_violation above -10*sup_tol; anything lower aborts, because it
/// means lambda fell below the Lipschitz bound or the operator lost its
/// M-matrix structure.
struct MonotoneReport {
  int sweeps_lower = 0;
  int sweeps_upper = 0;
  double final_step_lower = 0.0;
  double final_step_upper = 0.0;
  std::vector<SweepStat> lower_sweeps;
  std::vector<SweepStat> upper_sweeps;
  double worst_violation = 0.0;        // min over sweeps of min_violation
  double worst_cross_violation = 0.0;  // min over sweeps/nodes of upper-lower
  double bracket_gap = 0.0;            // sup |v_max - v_min|
  double box_min = 0.0;                // extremes over every recorded iterate
  double box_max = 0.0;
  double residual_lower = 0.0;
  double residual_upper = 0.0;
  bool warm_started = false;
  bool cold_restarted = false;
  std::vector<FieldFunction> lower_iterates;  // only when record_history
  std::vector<FieldFunction> upper_iterates;
};

class IterationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinMaxResult {
  FieldFunction v_min;
  FieldFunction v_max;
  MonotoneReport report;
};

struct SingleResult {
  FieldFunction v;
  MonotoneReport report;
};

/// Minimal and maximal solutions of the semilinear field problem for road
/// datum w: the lower bracket iterates the solution map from 0, the upper
/// from the constant cap k = (mu/nu)m, in lockstep, until both sup-steps stay
/// below sup_tol (one confirmation sweep each). Requires 0 <= w <= m.
MinMaxResult min_max_solutions(const FieldProblem& prob, const RoadFunction& w,
                               const IterationOptions& opts = {},
                               const RoadFunction* w_top = nullptr);

/// Monotone iteration from a verified discrete subsolution; the limit
/// dominates v_start nodewise. Throws IterationFailure if the subsolution
/// check fails.
SingleResult max_solution_from(const FieldProblem& prob, const RoadFunction& w,
                               const FieldFunction& v_start,
                               const IterationOptions& opts = {},
                               const RoadFunction* w_top = nullptr);

/// Maximal solution with an optional warm seed (pass nullptr for a cold
/// start from the cap). The first sweep decides the monotone direction; a
/// mixed-sign first step falls back to a cold start, since only ordered
/// seeds guarantee monotone convergence.
SingleResult max_solution_warm(const FieldProblem& prob, const RoadFunction& w,
                               const FieldFunction* seed,
                               const IterationOptions& opts = {},
                               const RoadFunction* w_top = nullptr);

/// Discrete subsolution check: worst signed violation max_i(LHS_i - RHS_i)
/// of the semilinear system; passes when it stays below tol.
std::pair<bool, double> check_subsolution(const FieldProblem& prob,
                                          const FieldFunction& v,
                                          const RoadFunction& w,
                                          double tol = 1e-9,
                                          const RoadFunction* w_top = nullptr);

/// Mirror image: worst of max_i(RHS_i - LHS_i).
std::pair<bool, double> check_supersolution(const FieldProblem& prob,
                                            const FieldFunction& v,
                                            const RoadFunction& w,
                                            double tol = 1e-9,
                                            const RoadFunction* w_top = nullptr);

/// Per-sweep history as CSV: `sweep,sup_step,min_violation,residual`.
void write_history_csv(const std::vector<SweepStat>& stats,
                       const std::filesystem::path& path);

}  // namespace fieldroad
