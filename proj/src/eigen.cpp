#include "fieldroad/eigen.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fieldroad/linsolve.hpp"

namespace fieldroad {

namespace {
constexpr double kPi = std::numbers::pi;
}

double lambda1_closed_form(double ell, double L) {
  if (!(ell > 0.0) || !(L > 0.0))
    throw std::invalid_argument("lambda1_closed_form: need ell, L > 0");
  const double a = kPi / (2.0 * ell);
  const double b = kPi / L;
  return a * a + b * b;
}

EigenPair phi1_exact(const FieldGrid& grid) {
  if (grid.nx % 2 != 0 || grid.ny % 2 != 0)
    throw std::invalid_argument(
        "phi1_exact: normalization node (0, L/2) needs even nx and ny");
  EigenPair pair;
  pair.lambda1 = lambda1_closed_form(grid.ell, grid.L);
  pair.phi1 = FieldFunction::zeros(grid);
  for (int j = 0; j <= grid.ny; ++j) {
    const double sy = std::sin(kPi * grid.x2(j) / grid.L);
    for (int i = 0; i <= grid.nx; ++i) {
      const double sx = std::sin(kPi * (grid.x1(i) + grid.ell) / (2.0 * grid.ell));
      pair.phi1.at(i, j) = sx * sy;
    }
  }
  // pin the exact boundary zeros and the normalization node
  for (int i = 0; i <= grid.nx; ++i) {
    pair.phi1.at(i, 0) = 0.0;
    pair.phi1.at(i, grid.ny) = 0.0;
  }
  for (int j = 0; j <= grid.ny; ++j) {
    pair.phi1.at(0, j) = 0.0;
    pair.phi1.at(grid.nx, j) = 0.0;
  }
  pair.phi1.at(grid.nx / 2, grid.ny / 2) = 1.0;
  return pair;
}

namespace {

// Dirichlet Laplacian over interior nodes of the full box; the road mode of
// the grid is irrelevant here.
SparseOperator assemble_dirichlet_laplacian(const FieldGrid& g) {
  const double ax = 1.0 / (g.h1 * g.h1);
  const double ay = 1.0 / (g.h2 * g.h2);
  const int nxi = g.nx - 1, nyi = g.ny - 1;
  const auto idx = [nxi](int i, int j) { return (j - 1) * nxi + (i - 1); };
  SparseBuilder builder(nxi * nyi);
  for (int j = 1; j <= nyi; ++j) {
    for (int i = 1; i <= nxi; ++i) {
      const int row = idx(i, j);
      if (j > 1) builder.add(row, idx(i, j - 1), -ay);
      if (i > 1) builder.add(row, idx(i - 1, j), -ax);
      builder.add(row, row, 2.0 * ax + 2.0 * ay);
      if (i < nxi) builder.add(row, idx(i + 1, j), -ax);
      if (j < nyi) builder.add(row, idx(i, j + 1), -ay);
    }
  }
  SparseOperator A = builder.finish(true);
  check_m_matrix(A);
  return A;
}

}  // namespace

double discrete_lambda1(const FieldGrid& grid, double tol,
                        std::vector<double>* eigvec) {
  const SparseOperator A = assemble_dirichlet_laplacian(grid);
  const int n = A.n;
  SolveOptions lin;
  lin.rel_tol = 1e-13;

  std::vector<double> x(n, 1.0);
  double xnorm = std::sqrt(static_cast<double>(n));
  for (double& xi : x) xi /= xnorm;

  double rho_prev = 0.0;
  const int max_iters = 500;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> y = solve_spd(A, x, lin);
    double yx = 0.0, yy = 0.0;
    for (int i = 0; i < n; ++i) {
      yx += y[i] * x[i];
      yy += y[i] * y[i];
    }
    // Rayleigh quotient of y: y^T A y / y^T y equals y^T x / y^T y up to the
    // inner-solve tolerance
    const double rho = yx / yy;
    const double ynorm = std::sqrt(yy);
    for (int i = 0; i < n; ++i) x[i] = y[i] / ynorm;
    if (it > 0 && std::abs(rho - rho_prev) <= tol * std::abs(rho)) {
      if (eigvec) *eigvec = x;
      return rho;
    }
    rho_prev = rho;
  }
  std::ostringstream os;
  os << "discrete_lambda1: no convergence in " << max_iters << " iterations";
  throw std::runtime_error(os.str());
}

std::vector<double> default_kpp_probes() {
  std::vector<double> s;
  for (int e = 1; e <= 8; ++e) s.push_back(std::pow(10.0, -e));
  return s;
}

bool kpp_condition(const ModelParams& p, const Reaction& f,
                   std::span<const double> s_probe) {
  const double lam1 = lambda1_closed_form(p.ell, p.Lh);
  for (double s : s_probe) {
    if (!(s > 0.0)) return false;
    if (lam1 > f.eval(s) / (p.D * s)) return false;
  }
  return !s_probe.empty();
}

bool kpp_condition(const ModelParams& p, const Reaction& f) {
  const auto probes = default_kpp_probes();
  return kpp_condition(p, f, probes);
}

double choose_epsilon(const ModelParams& p, const Reaction& f,
                      const FieldGrid& grid) {
  if (!kpp_condition(p, f))
    throw std::runtime_error("choose_epsilon: smallness condition fails");
  const EigenPair pair = phi1_exact(grid);
  const double d_lam = p.D * pair.lambda1;

  const auto admissible = [&](double eps) {
    for (int j = 0; j <= grid.ny; ++j) {
      for (int i = 0; i <= grid.nx; ++i) {
        const double s = eps * pair.phi1.at(i, j);
        if (d_lam * s > f.eval(s)) return false;
      }
    }
    return true;
  };

  double lo = 1e-12;
  if (!admissible(lo))
    throw std::runtime_error(
        "choose_epsilon: no admissible amplitude down to 1e-12");
  double hi = box_cap(p);
  if (admissible(hi)) return 0.99 * hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (admissible(mid))
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.99 * lo;
}

}  // namespace fieldroad
