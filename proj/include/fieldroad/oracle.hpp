#pragma once

#include <functional>
#include <span>

#include "fieldroad/field.hpp"

namespace fieldroad {

/// Explicit-Euler relaxation of the time-dependent system. dt = 0 picks
/// 0.9 times the tightest of the diffusion stability bound
/// min(h1^2,h2^2)/(4 max(D, Dp)) and the per-row rate bound that keeps the
/// update an invariant-box map.
struct ParabolicOptions {
  double dt = 0.0;
  double t_end = 5000.0;
  double steady_tol = 1e-9;  // sup-change per unit time
  std::function<void(double t, double change_rate)> progress;
  long progress_every = 20000;
};

struct ParabolicResult {
  RoadFunction u;
  FieldFunction v;
  long steps = 0;
  double final_change_rate = 0.0;
  bool reached_steady = false;
};

/// Marches du/dt = Dp u'' + g(u) + nu v(.,0) - mu u on the road and
/// dv/dt = D lap v + f(v) in the field (ghost-node flux rows) until the
/// sup-change per unit time drops below steady_tol or t_end is reached.
/// Initial data must lie in the box [0,m] x [0,k]; the flow is verified to
/// keep it there every step. Throws on blow-up (sup beyond 10 k).
ParabolicResult parabolic_relax(const ModelParams& p, const Reaction& f,
                                const Reaction& g, const RoadFunction& u0,
                                const FieldFunction& v0,
                                const ParabolicOptions& opts = {});

/// The shifted linear field system built from scratch (its own stencil code)
/// and solved by dense Gaussian elimination with partial pivoting. Ground
/// truth for the iterative path; capped at 400 unknowns.
FieldFunction dense_reference_solve(const FieldProblem& prob,
                                    const FieldFunction& z,
                                    const RoadFunction& w,
                                    const RoadFunction* w_top = nullptr);

/// A manufactured linear problem: exact solution, its Laplacian, and the
/// normal-derivative data on the road rows. The harness derives matching
/// sources, Robin data, and Dirichlet lifts.
struct ManufacturedCase {
  std::function<double(double, double)> exact;
  std::function<double(double, double)> laplacian;
  std::function<double(double)> ddx2_bottom;  // d/dx2 of exact at x2 = 0
  std::function<double(double)> ddx2_top;     // d/dx2 of exact at x2 = L
};

ManufacturedCase sinsin_case(double ell, double L);   // product of sines
ManufacturedCase sinpoly_case(double ell, double L);  // sine times (L-x2)x2
ManufacturedCase bilinear_case();                     // degree <= 1, exact

struct ConvergenceResult {
  std::vector<double> sup_errors;  // one per grid
  std::vector<double> orders;      // log2 ratios of successive errors
};

/// Solves the linear field problem with data manufactured from the case on
/// each nx in n_list (ny scaled to keep cells near-square) and reports
/// sup-errors and observed orders.
ConvergenceResult manufactured_convergence(const ModelParams& p,
                                           const ManufacturedCase& mc,
                                           std::span<const int> n_list,
                                           double lambda,
                                           GridMode mode = GridMode::OneRoad);

}  // namespace fieldroad
