#pragma once

#include <optional>

#include "fieldroad/grid.hpp"
#include "fieldroad/model.hpp"

namespace fieldroad {

/// The shifted 1D road problem: given the field trace and the previous road
/// iterate u, the next iterate solves
///   -Dp U'' + (mu + eta) U = nu*trace + g(u) + eta*u,  U(+-ell) = 0,
/// with eta at least the Lipschitz bound of g. For the top road of a
/// two-road system, params carries the primed constants (Dp -> D'', mu ->
/// mu', nu -> nu', m -> m').
struct RoadProblem {
  ModelParams params;
  Reaction g;
  FieldGrid grid;
  double eta = 0.0;
};

RoadProblem make_road_problem(const ModelParams& p, const Reaction& g,
                              const FieldGrid& grid,
                              std::optional<double> eta = std::nullopt);

/// One application of the road solution map via tridiagonal elimination.
RoadFunction apply_T_road(const RoadProblem& prob, const RoadFunction& trace,
                          const RoadFunction& u);

/// Sup-norm residual of -Dp u'' + mu*u - g(u) - nu*trace at interior nodes.
double road_residual(const RoadProblem& prob, const RoadFunction& u,
                     const RoadFunction& trace);

}  // namespace fieldroad
