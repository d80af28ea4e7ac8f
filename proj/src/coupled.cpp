#include "fieldroad/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fieldroad/eigen.hpp"

namespace fieldroad {

namespace {

double road_sup_diff(const RoadFunction& a, const RoadFunction& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  return s;
}

double road_directed_min(const RoadFunction& prev, const RoadFunction& next,
                         int direction) {
  double s = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < prev.values.size(); ++i)
    s = std::min(s, direction * (next.values[i] - prev.values[i]));
  return s;
}

CoupledSolution run_bracket(const ModelParams& p, const Reaction& f,
                            const Reaction& g, const FieldGrid& grid,
                            const OuterOptions& opts, bool from_cap) {
  const FieldProblem fp = make_field_problem(p, f, grid);
  const RoadProblem rp = make_road_problem(p, g, grid);
  const int direction = from_cap ? -1 : +1;
  const double resid_target =
      100.0 * opts.inner.sup_tol * coupled_residual_scale(p, g, rp.eta);

  RoadFunction u = from_cap ? RoadFunction::constant(grid, p.m)
                            : RoadFunction::zeros(grid);
  OuterReport rep;
  rep.u_min = u.min_value();
  rep.u_max = u.max_value();
  rep.inner_box_min = std::numeric_limits<double>::infinity();
  rep.inner_box_max = -std::numeric_limits<double>::infinity();
  rep.inner_worst_violation = 0.0;
  rep.worst_monotonicity_violation = 0.0;

  FieldFunction v = FieldFunction::zeros(grid);
  bool have_seed = false;
  double step = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= opts.max_outer; ++sweep) {
    SingleResult inner = max_solution_warm(fp, u, have_seed ? &v : nullptr,
                                           opts.inner);
    v = std::move(inner.v);
    have_seed = true;
    rep.inner_sweeps_total += inner.report.sweeps_lower + inner.report.sweeps_upper;
    rep.inner_worst_violation =
        std::min(rep.inner_worst_violation, inner.report.worst_violation);
    rep.inner_box_min = std::min(rep.inner_box_min, inner.report.box_min);
    rep.inner_box_max = std::max(rep.inner_box_max, inner.report.box_max);

    const RoadFunction trace = trace_to_road(v, RoadSide::Bottom);
    RoadFunction u_next = apply_T_road(rp, trace, u);

    step = road_sup_diff(u_next, u);
    rep.worst_monotonicity_violation =
        std::min(rep.worst_monotonicity_violation,
                 road_directed_min(u, u_next, direction));
    if (rep.worst_monotonicity_violation < -10.0 * opts.outer_tol) {
      std::ostringstream os;
      os << "solve_coupled: outer ordering violated by "
         << -rep.worst_monotonicity_violation << " at sweep " << sweep;
      throw IterationFailure(os.str());
    }
    u = std::move(u_next);
    rep.u_min = std::min(rep.u_min, u.min_value());
    rep.u_max = std::max(rep.u_max, u.max_value());
    rep.sweeps = sweep;
    rep.final_step = step;

    if (step < opts.outer_tol) {
      // close the pair: recompute the field for the final road iterate and
      // accept only if both discrete equations hold to the residual contract
      SingleResult closing = max_solution_warm(fp, u, &v, opts.inner);
      v = closing.v;
      rep.inner_sweeps_total +=
          closing.report.sweeps_lower + closing.report.sweeps_upper;
      rep.inner_box_min = std::min(rep.inner_box_min, closing.report.box_min);
      rep.inner_box_max = std::max(rep.inner_box_max, closing.report.box_max);
      const double rf = field_residual(fp, v, u);
      const double rr = road_residual(rp, u, trace_to_road(v, RoadSide::Bottom));
      if (rf <= resid_target && rr <= resid_target) {
        CoupledSolution sol;
        sol.u = std::move(u);
        sol.v = std::move(v);
        sol.outer = rep;
        sol.residual_field = rf;
        sol.residual_road = rr;
        sol.bracket = from_cap ? "upper" : "lower";
        return sol;
      }
    }
  }
  std::ostringstream os;
  os << "solve_coupled: no convergence in " << opts.max_outer
     << " outer sweeps (last step " << step << ")";
  throw IterationFailure(os.str());
}

}  // namespace

RoadFunction outer_T(const ModelParams& p, const Reaction& f, const Reaction& g,
                     const RoadFunction& u, const OuterOptions& opts) {
  const FieldProblem fp = make_field_problem(p, f, u.grid);
  const RoadProblem rp = make_road_problem(p, g, u.grid);
  MinMaxResult mm = min_max_solutions(fp, u, opts.inner);
  return apply_T_road(rp, trace_to_road(mm.v_max, RoadSide::Bottom), u);
}

double coupled_residual_scale(const ModelParams& p, const Reaction& g,
                              double eta) {
  const double box = std::max({1.0, box_cap(p), p.m});
  return box * (1.0 + p.nu + eta + g.lipschitz);
}

std::pair<CoupledSolution, CoupledSolution> solve_coupled(
    const ModelParams& p, const Reaction& f, const Reaction& g,
    const FieldGrid& grid, const OuterOptions& opts) {
  CoupledSolution lower = run_bracket(p, f, g, grid, opts, false);
  CoupledSolution upper = run_bracket(p, f, g, grid, opts, true);
  return {std::move(lower), std::move(upper)};
}

NontrivialFlags nontriviality_check(const CoupledSolution& sol,
                                    double eps_bound, double sup_tol) {
  NontrivialFlags flags;
  const double floor = 100.0 * sup_tol;
  flags.u_nontrivial = sol.u.sup() > floor;
  if (eps_bound > 0.0) {
    const EigenPair pair = phi1_exact(sol.v.grid);
    bool dominated = true;
    for (size_t i = 0; i < sol.v.values.size(); ++i) {
      if (sol.v.values[i] < eps_bound * pair.phi1.values[i] - 1e-8) {
        dominated = false;
        break;
      }
    }
    flags.v_nontrivial = dominated && sol.v.sup() > floor;
  } else {
    flags.v_nontrivial = sol.v.sup() > floor;
  }
  return flags;
}

}  // namespace fieldroad
