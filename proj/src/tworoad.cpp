#include "fieldroad/tworoad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fieldroad/eigen.hpp"

namespace fieldroad {

TwoRoadParams make_two_road_params(const ModelParams& base, double Dpp,
                                   double mu_p, double nu_p) {
  TwoRoadParams p2;
  p2.base = base;
  p2.Dpp = Dpp;
  p2.mu_p = mu_p;
  p2.nu_p = nu_p;
  p2.m_p = (nu_p / mu_p) * (base.mu / base.nu) * base.m;
  return p2;
}

ValidationReport validate_two_road(const TwoRoadParams& p2, const Reaction& f,
                                   const Reaction& g, const Reaction& h) {
  const ModelParams& p = p2.base;
  ValidationReport rep = validate_params(p, f, g);

  const double tol = 1e-12;
  auto push = [&rep](const std::string& name, bool pass, double worst,
                     double where, const std::string& detail) {
    rep.checks.push_back({name, pass, worst, where, detail});
  };

  const bool primes_pos = p2.Dpp > 0.0 && p2.mu_p > 0.0 && p2.nu_p > 0.0;
  push("primed_positivity", primes_pos, primes_pos ? 0.0 : -1.0, 0.0,
       "D'', mu', nu' > 0");

  const double ratio = p.mu / p.nu;
  const double ratio_p = p2.mu_p / p2.nu_p;
  push("exchange_ratio_order", ratio >= ratio_p - tol, ratio - ratio_p, 0.0,
       "mu/nu >= mu'/nu'");

  const double m_p_expected = (p2.nu_p / p2.mu_p) * ratio * p.m;
  push("top_cap_derivation", std::abs(p2.m_p - m_p_expected) <= tol * (1.0 + m_p_expected),
       p2.m_p - m_p_expected, 0.0, "m' = (nu'/mu')(mu/nu) m");

  const double h0 = h.eval(0.0);
  push("h_zero_at_origin", std::abs(h0) <= tol, h0, 0.0, "h(0) = 0");
  const double hmp = h.eval(p2.m_p);
  push("h_nonpositive_at_cap", hmp <= tol, hmp, p2.m_p, "h(m') <= 0");

  // derived identities the section's caps rest on
  const double k = box_cap(p);
  push("field_cap_at_least_one", k >= 1.0 - tol, k - 1.0, 0.0, "(mu/nu) m >= 1");
  const double k_top = (p2.mu_p / p2.nu_p) * p2.m_p;
  push("caps_agree", std::abs(k_top - k) <= tol * (1.0 + k), k_top - k, 0.0,
       "(mu'/nu') m' = (mu/nu) m");

  push("h_interval_covers_cap", h.working_max >= p2.m_p - tol,
       h.working_max - p2.m_p, 0.0, "h working interval covers [0, m']");
  return rep;
}

FieldProblem two_road_field_problem(const TwoRoadParams& p2, const Reaction& f,
                                    const FieldGrid& grid,
                                    std::optional<double> lambda) {
  if (grid.mode != GridMode::TwoRoad)
    throw std::invalid_argument("two_road_field_problem: grid is not two-road");
  FieldProblem prob = make_field_problem(p2.base, f, grid, lambda);
  prob.mu_p = p2.mu_p;
  prob.nu_p = p2.nu_p;
  return prob;
}

ModelParams top_road_params(const TwoRoadParams& p2) {
  ModelParams p = p2.base;
  p.Dp = p2.Dpp;
  p.mu = p2.mu_p;
  p.nu = p2.nu_p;
  p.m = p2.m_p;
  return p;
}

FieldFunction apply_S2(const FieldProblem& prob2, const FieldFunction& z,
                       const RoadFunction& u_t, const RoadFunction& w_t,
                       const SolveOptions& opts) {
  const SparseOperator A = assemble_field_operator(prob2);
  return apply_S_with(A, prob2, z, u_t, &w_t, opts);
}

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

TwoRoadSolution run_bracket2(const TwoRoadParams& p2, const Reaction& f,
                             const Reaction& g, const Reaction& h,
                             const FieldGrid& grid, const OuterOptions& opts,
                             bool from_cap) {
  const FieldProblem fp = two_road_field_problem(p2, f, grid);
  const RoadProblem rp_bottom = make_road_problem(p2.base, g, grid);
  const RoadProblem rp_top = make_road_problem(top_road_params(p2), h, grid);
  const int direction = from_cap ? -1 : +1;
  const double resid_target =
      100.0 * opts.inner.sup_tol *
      std::max(coupled_residual_scale(p2.base, g, rp_bottom.eta),
               coupled_residual_scale(top_road_params(p2), h, rp_top.eta));

  RoadFunction u = from_cap ? RoadFunction::constant(grid, p2.base.m)
                            : RoadFunction::zeros(grid);
  RoadFunction w = from_cap ? RoadFunction::constant(grid, p2.m_p)
                            : RoadFunction::zeros(grid);
  OuterReport rep;
  rep.u_min = std::min(u.min_value(), w.min_value());
  rep.u_max = std::max(u.max_value(), w.max_value());
  rep.inner_box_min = std::numeric_limits<double>::infinity();
  rep.inner_box_max = -std::numeric_limits<double>::infinity();

  FieldFunction v = FieldFunction::zeros(grid);
  bool have_seed = false;
  double step = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= opts.max_outer; ++sweep) {
    SingleResult inner =
        max_solution_warm(fp, u, have_seed ? &v : nullptr, opts.inner, &w);
    v = std::move(inner.v);
    have_seed = true;
    rep.inner_sweeps_total += inner.report.sweeps_lower + inner.report.sweeps_upper;
    rep.inner_worst_violation =
        std::min(rep.inner_worst_violation, inner.report.worst_violation);
    rep.inner_box_min = std::min(rep.inner_box_min, inner.report.box_min);
    rep.inner_box_max = std::max(rep.inner_box_max, inner.report.box_max);

    RoadFunction u_next =
        apply_T_road(rp_bottom, trace_to_road(v, RoadSide::Bottom), u);
    RoadFunction w_next =
        apply_T_road(rp_top, trace_to_road(v, RoadSide::Top), w);

    step = std::max(road_sup_diff(u_next, u), road_sup_diff(w_next, w));
    rep.worst_monotonicity_violation =
        std::min({rep.worst_monotonicity_violation,
                  road_directed_min(u, u_next, direction),
                  road_directed_min(w, w_next, direction)});
    if (rep.worst_monotonicity_violation < -10.0 * opts.outer_tol) {
      std::ostringstream os;
      os << "solve_two_road: outer ordering violated by "
         << -rep.worst_monotonicity_violation << " at sweep " << sweep;
      throw IterationFailure(os.str());
    }
    u = std::move(u_next);
    w = std::move(w_next);
    rep.u_min = std::min({rep.u_min, u.min_value(), w.min_value()});
    rep.u_max = std::max({rep.u_max, u.max_value(), w.max_value()});
    rep.sweeps = sweep;
    rep.final_step = step;

    if (step < opts.outer_tol) {
      SingleResult closing = max_solution_warm(fp, u, &v, opts.inner, &w);
      v = closing.v;
      rep.inner_sweeps_total +=
          closing.report.sweeps_lower + closing.report.sweeps_upper;
      const double rf = field_residual(fp, v, u, &w);
      const double rb =
          road_residual(rp_bottom, u, trace_to_road(v, RoadSide::Bottom));
      const double rt = road_residual(rp_top, w, trace_to_road(v, RoadSide::Top));
      if (rf <= resid_target && rb <= resid_target && rt <= resid_target) {
        TwoRoadSolution sol;
        sol.u = std::move(u);
        sol.v = std::move(v);
        sol.w = std::move(w);
        sol.outer = rep;
        sol.residual_field = rf;
        sol.residual_road_bottom = rb;
        sol.residual_road_top = rt;
        sol.bracket = from_cap ? "upper" : "lower";
        return sol;
      }
    }
  }
  std::ostringstream os;
  os << "solve_two_road: no convergence in " << opts.max_outer
     << " outer sweeps (last step " << step << ")";
  throw IterationFailure(os.str());
}

}  // namespace

std::pair<TwoRoadSolution, TwoRoadSolution> solve_two_road(
    const TwoRoadParams& p2, const Reaction& f, const Reaction& g,
    const Reaction& h, const FieldGrid& grid, const OuterOptions& opts) {
  TwoRoadSolution lower = run_bracket2(p2, f, g, h, grid, opts, false);
  TwoRoadSolution upper = run_bracket2(p2, f, g, h, grid, opts, true);
  return {std::move(lower), std::move(upper)};
}

TwoRoadFlags nontriviality_check2(const TwoRoadSolution& sol, double eps_bound,
                                  double sup_tol) {
  TwoRoadFlags flags;
  const double floor = 100.0 * sup_tol;
  flags.u_nontrivial = sol.u.sup() > floor;
  flags.w_nontrivial = sol.w.sup() > floor;
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
