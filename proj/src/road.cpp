#include "fieldroad/road.hpp"

#include <cmath>
#include <sstream>

#include "fieldroad/linsolve.hpp"

namespace fieldroad {

RoadProblem make_road_problem(const ModelParams& p, const Reaction& g,
                              const FieldGrid& grid,
                              std::optional<double> eta) {
  RoadProblem prob;
  prob.params = p;
  prob.g = g;
  prob.grid = grid;
  prob.eta = eta.value_or(g.lipschitz);
  if (prob.eta < g.lipschitz) {
    std::ostringstream os;
    os << "make_road_problem: eta " << prob.eta << " below Lipschitz bound "
       << g.lipschitz;
    throw std::invalid_argument(os.str());
  }
  return prob;
}

RoadFunction apply_T_road(const RoadProblem& prob, const RoadFunction& trace,
                          const RoadFunction& u) {
  const FieldGrid& g = prob.grid;
  const int n = g.nx - 1;
  const double a = prob.params.Dp / (g.h1 * g.h1);
  const double d = 2.0 * a + prob.params.mu + prob.eta;
  std::vector<double> lower(n - 1, -a), diag(n, d), upper(n - 1, -a), b(n);
  for (int i = 1; i < g.nx; ++i) {
    const double ui = u.values[i];
    b[i - 1] = prob.params.nu * trace.values[i] + prob.g.eval(ui) +
               prob.eta * ui;
  }
  const std::vector<double> x = solve_tridiag(lower, diag, upper, b);
  RoadFunction out = RoadFunction::zeros(g);
  for (int i = 1; i < g.nx; ++i) out.values[i] = x[i - 1];
  return out;
}

double road_residual(const RoadProblem& prob, const RoadFunction& u,
                     const RoadFunction& trace) {
  const FieldGrid& g = prob.grid;
  const double a = prob.params.Dp / (g.h1 * g.h1);
  double worst = 0.0;
  for (int i = 1; i < g.nx; ++i) {
    const double lap = u.values[i - 1] - 2.0 * u.values[i] + u.values[i + 1];
    const double r = -a * lap + prob.params.mu * u.values[i] -
                     prob.g.eval(u.values[i]) -
                     prob.params.nu * trace.values[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace fieldroad
