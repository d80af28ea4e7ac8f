#pragma once

#include <span>
#include <vector>

#include "fieldroad/grid.hpp"
#include "fieldroad/model.hpp"

namespace fieldroad {

/// Principal Dirichlet eigenpair of the rectangle, normalized so that the
/// eigenfunction equals 1 at the center node (0, L/2).
struct EigenPair {
  double lambda1 = 0.0;
  FieldFunction phi1;
};

/// (pi/(2 ell))^2 + (pi/L)^2.
double lambda1_closed_form(double ell, double L);

/// Nodal sampling of sin(pi (x1+ell)/(2 ell)) * sin(pi x2 / L) paired with
/// the closed-form eigenvalue. Needs nx and ny even so the normalization
/// node exists. The values are those of the full Dirichlet box regardless of
/// the grid's road mode.
EigenPair phi1_exact(const FieldGrid& grid);

/// Smallest eigenvalue of the 5-point Dirichlet Laplacian via inverse power
/// iteration (inner solves through the SPD solver). Optionally returns the
/// eigenvector over interior nodes, row-major j-then-i.
double discrete_lambda1(const FieldGrid& grid, double tol = 1e-10,
                        std::vector<double>* eigvec = nullptr);

/// Default probe ladder 1e-1 .. 1e-8 for the smallness condition.
std::vector<double> default_kpp_probes();

/// Checks lambda1 <= f(s)/(D s) at every probe.
bool kpp_condition(const ModelParams& p, const Reaction& f,
                   std::span<const double> s_probe);
bool kpp_condition(const ModelParams& p, const Reaction& f);

/// Largest amplitude (shrunk by 0.99) such that the nodal inequality
/// D*lambda1*eps*phi1 <= f(eps*phi1) holds everywhere, found by bisection
/// over (0, box_cap]. Throws std::runtime_error when no amplitude down to
/// 1e-12 works.
double choose_epsilon(const ModelParams& p, const Reaction& f,
                      const FieldGrid& grid);

}  // namespace fieldroad
