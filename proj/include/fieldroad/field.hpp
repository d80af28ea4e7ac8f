#pragma once

#include <optional>

#include "fieldroad/grid.hpp"
#include "fieldroad/linsolve.hpp"
#include "fieldroad/model.hpp"

namespace fieldroad {

/// The shifted linear field problem behind one inner-iteration step.
/// lambda must dominate the Lipschitz bound of f; that is what makes the
/// solution map monotone. In two-road mode mu_p/nu_p carry the exchange
/// rates of the top road.
struct FieldProblem {
  ModelParams params;
  Reaction f;
  FieldGrid grid;
  double lambda = 0.0;
  double mu_p = 0.0;
  double nu_p = 0.0;
};

/// lambda defaults to the certified Lipschitz bound of f.
FieldProblem make_field_problem(const ModelParams& p, const Reaction& f,
                                const FieldGrid& grid,
                                std::optional<double> lambda = std::nullopt);

/// Assembles the SPD operator over the unknown nodes.
///
/// Interior nodes carry the 5-point stencil -D*lap_h + lambda. Road rows are
/// produced by ghost-node elimination of the exchange flux
///   D dv/dn = mu*u - nu*v
/// with outward normal (0,-1) at the bottom (ghost value
/// v_{i,-1} = v_{i,1} + (2 h2 / D)(mu u_i - nu v_{i,0})) and (0,+1) at the
/// top, then scaled by 1/2 so the matrix stays symmetric. The nu term lands
/// on the diagonal; the mu source belongs to the right-hand side.
SparseOperator assemble_field_operator(const FieldProblem& prob);

/// Right-hand side for the shifted solve: f(z) + lambda*z at interior nodes,
/// (f(z) + lambda*z)/2 + (mu/h2)*w at road rows (and the mirrored mu_p term
/// on the top road when present).
std::vector<double> field_rhs(const FieldProblem& prob, const FieldFunction& z,
                              const RoadFunction& w,
                              const RoadFunction* w_top = nullptr);

/// One application of the inner solution map: solve the assembled system for
/// the given iterate z and road datum w. Inputs outside [0, box_cap] x [0, m]
/// only warn (iterates may overshoot by solver tolerance).
FieldFunction apply_S(const FieldProblem& prob, const FieldFunction& z,
                      const RoadFunction& w, const SolveOptions& opts = {});

/// Same, reusing a previously assembled operator; w_top supplies the second
/// road datum in two-road mode.
FieldFunction apply_S_with(const SparseOperator& A, const FieldProblem& prob,
                           const FieldFunction& z, const RoadFunction& w,
                           const RoadFunction* w_top,
                           const SolveOptions& opts = {});

/// Signed residual (LHS - RHS) of the discrete semilinear field equation at
/// every unknown: the lambda shift cancels, leaving -D*lap_h v + exchange
/// terms - f(v) - mu source, with road rows in their symmetrized
/// (half-scaled) form. Positive entries mean the node exceeds a solution,
/// which is what the sub/supersolution checks inspect.
std::vector<double> field_residual_vector(const FieldProblem& prob,
                                          const FieldFunction& v,
                                          const RoadFunction& w,
                                          const RoadFunction* w_top = nullptr);

/// Sup-norm of field_residual_vector.
double field_residual(const FieldProblem& prob, const FieldFunction& v,
                      const RoadFunction& w, const RoadFunction* w_top = nullptr);

/// Natural magnitude of field_residual for a nodal error of size one:
/// the inf-norm of the operator plus the reaction slope. Used to scale
/// residual tolerances.
double field_residual_scale(const FieldProblem& prob);

}  // namespace fieldroad
