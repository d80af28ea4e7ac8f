#pragma once

#include <utility>

#include "fieldroad/coupled.hpp"

namespace fieldroad {

/// Parameters of the two-road system: the base set plus the top road's
/// diffusivity D'' and exchange rates mu', nu'. The top cap is derived,
/// m' = (nu'/mu')(mu/nu) m, which makes both roads share the field cap
/// k = (mu/nu) m = (mu'/nu') m'.
struct TwoRoadParams {
  ModelParams base;
  double Dpp = 1.0;
  double mu_p = 1.0;
  double nu_p = 1.0;
  double m_p = 1.0;  // derived
};

TwoRoadParams make_two_road_params(const ModelParams& base, double Dpp,
                                   double mu_p, double nu_p);

/// Standing assumptions of the two-road system: positivity, the ordering
/// mu/nu >= mu'/nu' (validated, not silently enforced by swapping roads),
/// m >= nu/mu, the sign pattern of f, g(0)=h(0)=0, g(m)<=0, h(m')<=0, and
/// the derived cap identities.
ValidationReport validate_two_road(const TwoRoadParams& p2, const Reaction& f,
                                   const Reaction& g, const Reaction& h);

/// Field problem with Robin exchange rows on both j=0 and j=ny.
FieldProblem two_road_field_problem(const TwoRoadParams& p2, const Reaction& f,
                                    const FieldGrid& grid,
                                    std::optional<double> lambda = std::nullopt);

/// ModelParams view of the top road (Dp -> D'', mu -> mu', nu -> nu',
/// m -> m') so the 1D road solver serves both sides.
ModelParams top_road_params(const TwoRoadParams& p2);

/// Inner solution map with both road data. Requires 0 <= u_t <= m and
/// 0 <= w_t <= m'.
FieldFunction apply_S2(const FieldProblem& prob2, const FieldFunction& z,
                       const RoadFunction& u_t, const RoadFunction& w_t,
                       const SolveOptions& opts = {});

struct TwoRoadSolution {
  RoadFunction u;   // bottom road
  FieldFunction v;  // field
  RoadFunction w;   // top road
  OuterReport outer;
  double residual_field = 0.0;
  double residual_road_bottom = 0.0;
  double residual_road_top = 0.0;
  std::string bracket;
};

/// Outer iteration on the pair (u, w) in [0,m] x [0,m']: the maximal field
/// solution for the current pair feeds two independent road solves (bottom
/// with g, top with h). Brackets start from (0,0) and (m,m'); the returned
/// pair is (lower, upper).
std::pair<TwoRoadSolution, TwoRoadSolution> solve_two_road(
    const TwoRoadParams& p2, const Reaction& f, const Reaction& g,
    const Reaction& h, const FieldGrid& grid, const OuterOptions& opts = {});

struct TwoRoadFlags {
  bool u_nontrivial = false;
  bool v_nontrivial = false;
  bool w_nontrivial = false;
};

TwoRoadFlags nontriviality_check2(const TwoRoadSolution& sol, double eps_bound,
                                  double sup_tol = 1e-10);

}  // namespace fieldroad
