#include "fieldroad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fieldroad {

ParabolicResult parabolic_relax(const ModelParams& p, const Reaction& f,
                                const Reaction& g, const RoadFunction& u0,
                                const FieldFunction& v0,
                                const ParabolicOptions& opts) {
  const FieldGrid& grid = v0.grid;
  if (grid.mode != GridMode::OneRoad)
    throw std::invalid_argument("parabolic_relax: one-road grids only");
  const double ax = p.D / (grid.h1 * grid.h1);
  const double ay = p.D / (grid.h2 * grid.h2);
  const double ar = p.Dp / (grid.h1 * grid.h1);
  const double k = box_cap(p);

  const double diff_bound = std::min(grid.h1 * grid.h1, grid.h2 * grid.h2) /
                            (4.0 * std::max(p.D, p.Dp));
  // per-row decay rates; keeping dt below 1/rate makes each update a convex
  // combination that cannot leave the box
  const double rate_field = 2.0 * ax + 2.0 * ay + f.lipschitz;
  const double rate_road_row = rate_field + 2.0 * p.nu / grid.h2;
  const double rate_road = 2.0 * ar + p.mu + g.lipschitz;
  const double rate_bound = 1.0 / std::max({rate_field, rate_road_row, rate_road});
  double dt = opts.dt > 0.0 ? opts.dt : 0.9 * std::min(diff_bound, rate_bound);
  if (dt > diff_bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "parabolic_relax: dt " << dt << " violates the stability bound "
       << diff_bound;
    throw std::invalid_argument(os.str());
  }

  const double box_slack = 1e-12 * (1.0 + k);
  auto check_box = [&](const FieldFunction& v, const RoadFunction& u) {
    if (v.min_value() < -box_slack || v.max_value() > k + box_slack ||
        u.min_value() < -box_slack || u.max_value() > p.m + box_slack)
      throw std::runtime_error("parabolic_relax: flow left the invariant box");
  };
  check_box(v0, u0);

  FieldFunction v = v0;
  RoadFunction u = u0;
  FieldFunction v_next = v;
  RoadFunction u_next = u;

  ParabolicResult res;
  double t = 0.0;
  const long max_steps = static_cast<long>(std::ceil(opts.t_end / dt));
  for (long step = 1; step <= max_steps; ++step) {
    double change = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 1; i < grid.nx; ++i) {
        const double vc = v.at(i, j);
        double rate;
        if (j == 0) {
          rate = ax * (v.at(i - 1, 0) - 2.0 * vc + v.at(i + 1, 0)) +
                 2.0 * ay * (v.at(i, 1) - vc) +
                 (2.0 / grid.h2) * (p.mu * u.values[i] - p.nu * vc) +
                 f.eval(vc);
        } else {
          rate = ax * (v.at(i - 1, j) - 2.0 * vc + v.at(i + 1, j)) +
                 ay * (v.at(i, j - 1) - 2.0 * vc + v.at(i, j + 1)) +
                 f.eval(vc);
        }
        v_next.at(i, j) = vc + dt * rate;
        change = std::max(change, std::abs(dt * rate));
      }
    }
    for (int i = 1; i < grid.nx; ++i) {
      const double ui = u.values[i];
      const double rate = ar * (u.values[i - 1] - 2.0 * ui + u.values[i + 1]) +
                          g.eval(ui) + p.nu * v.at(i, 0) - p.mu * ui;
      u_next.values[i] = ui + dt * rate;
      change = std::max(change, std::abs(dt * rate));
    }
    std::swap(v.values, v_next.values);
    std::swap(u.values, u_next.values);
    t += dt;
    res.steps = step;
    res.final_change_rate = change / dt;

    if (v.sup() > 10.0 * k || u.sup() > 10.0 * k)
      throw std::runtime_error("parabolic_relax: blow-up detected");
    check_box(v, u);

    if (opts.progress && step % opts.progress_every == 0)
      opts.progress(t, res.final_change_rate);
    if (res.final_change_rate < opts.steady_tol) {
      res.reached_steady = true;
      break;
    }
  }
  res.u = std::move(u);
  res.v = std::move(v);
  return res;
}

namespace {

// Dense elimination with partial pivoting; the one place a direct solve
// exists in this project.
std::vector<double> gauss_solve(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  std::vector<int> perm(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0.0)
      throw std::runtime_error("dense solve: singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double factor = A[r][col] / A[col][col];
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace

FieldFunction dense_reference_solve(const FieldProblem& prob,
                                    const FieldFunction& z,
                                    const RoadFunction& w,
                                    const RoadFunction* w_top) {
  const FieldGrid& g = prob.grid;
  const int n = g.n_unknowns();
  if (n > 400)
    throw std::invalid_argument("dense_reference_solve: more than 400 unknowns");
  if (g.mode == GridMode::TwoRoad && w_top == nullptr)
    throw std::invalid_argument("dense_reference_solve: missing top road datum");
  const ModelParams& p = prob.params;
  const double ax = p.D / (g.h1 * g.h1);
  const double ay = p.D / (g.h2 * g.h2);

  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);

  for (int j = 0; j < g.unknown_rows(); ++j) {
    const bool bottom = (j == 0);
    const bool top = (g.mode == GridMode::TwoRoad && j == g.ny);
    for (int i = 1; i < g.nx; ++i) {
      const int r = g.unknown_index(i, j);
      const double zi = z.at(i, j);
      if (bottom || top) {
        const double nu_row = bottom ? p.nu : prob.nu_p;
        const double mu_row = bottom ? p.mu : prob.mu_p;
        const double w_row = bottom ? w.values[i] : w_top->values[i];
        const int j_in = bottom ? 1 : g.ny - 1;
        A[r][r] = ax + ay + nu_row / g.h2 + 0.5 * prob.lambda;
        if (i > 1) A[r][g.unknown_index(i - 1, j)] = -0.5 * ax;
        if (i < g.nx - 1) A[r][g.unknown_index(i + 1, j)] = -0.5 * ax;
        A[r][g.unknown_index(i, j_in)] = -ay;
        b[r] = 0.5 * (prob.f.eval(zi) + prob.lambda * zi) +
               (mu_row / g.h2) * w_row;
      } else {
        A[r][r] = 2.0 * ax + 2.0 * ay + prob.lambda;
        if (i > 1) A[r][g.unknown_index(i - 1, j)] = -ax;
        if (i < g.nx - 1) A[r][g.unknown_index(i + 1, j)] = -ax;
        if (g.is_unknown(i, j - 1)) A[r][g.unknown_index(i, j - 1)] = -ay;
        if (g.is_unknown(i, j + 1)) A[r][g.unknown_index(i, j + 1)] = -ay;
        b[r] = prob.f.eval(zi) + prob.lambda * zi;
      }
    }
  }
  const std::vector<double> x = gauss_solve(std::move(A), std::move(b));
  FieldFunction out = FieldFunction::zeros(g);
  out.set_unknowns(x);
  return out;
}

ManufacturedCase sinsin_case(double ell, double L) {
  const double a = std::numbers::pi / (2.0 * ell);
  const double b = std::numbers::pi / L;
  ManufacturedCase mc;
  mc.exact = [a, b, ell](double x1, double x2) {
    return std::sin(a * (x1 + ell)) * std::sin(b * x2);
  };
  mc.laplacian = [a, b, ell](double x1, double x2) {
    return -(a * a + b * b) * std::sin(a * (x1 + ell)) * std::sin(b * x2);
  };
  mc.ddx2_bottom = [a, b, ell](double x1) {
    return b * std::sin(a * (x1 + ell));
  };
  mc.ddx2_top = [a, b, ell, L](double x1) {
    return b * std::sin(a * (x1 + ell)) * std::cos(b * L);
  };
  return mc;
}

ManufacturedCase sinpoly_case(double ell, double L) {
  const double a = std::numbers::pi / (2.0 * ell);
  ManufacturedCase mc;
  mc.exact = [a, ell, L](double x1, double x2) {
    return std::sin(a * (x1 + ell)) * (L - x2) * x2;
  };
  mc.laplacian = [a, ell, L](double x1, double x2) {
    return -a * a * std::sin(a * (x1 + ell)) * (L - x2) * x2 -
           2.0 * std::sin(a * (x1 + ell));
  };
  mc.ddx2_bottom = [a, ell, L](double x1) {
    return L * std::sin(a * (x1 + ell));
  };
  mc.ddx2_top = [a, ell, L](double x1) {
    return -L * std::sin(a * (x1 + ell));
  };
  return mc;
}

ManufacturedCase bilinear_case() {
  ManufacturedCase mc;
  mc.exact = [](double x1, double x2) { return (1.0 + 0.5 * x1) * (2.0 + 0.25 * x2); };
  mc.laplacian = [](double, double) { return 0.0; };
  mc.ddx2_bottom = [](double x1) { return 0.25 * (1.0 + 0.5 * x1); };
  mc.ddx2_top = [](double x1) { return 0.25 * (1.0 + 0.5 * x1); };
  return mc;
}

ConvergenceResult manufactured_convergence(const ModelParams& p,
                                           const ManufacturedCase& mc,
                                           std::span<const int> n_list,
                                           double lambda, GridMode mode) {
  ConvergenceResult res;
  const Reaction none = make_reaction("zero", ReactionKind::Field, 1.0);
  for (int nx : n_list) {
    int ny = std::max<int>(4, static_cast<int>(std::lround(nx * p.Lh / (2.0 * p.ell))));
    if (ny % 2 != 0) ++ny;
    const FieldGrid g = build_field_grid(p.ell, p.Lh, nx, ny, mode);
    FieldProblem prob = make_field_problem(p, none, g, lambda);
    if (mode == GridMode::TwoRoad) {
      prob.mu_p = p.mu;
      prob.nu_p = p.nu;
    }
    const SparseOperator A = assemble_field_operator(prob);
    const double ax = p.D / (g.h1 * g.h1);
    const double ay = p.D / (g.h2 * g.h2);

    std::vector<double> b(g.n_unknowns(), 0.0);
    for (int j = 0; j < g.unknown_rows(); ++j) {
      const bool bottom = (j == 0);
      const bool top = (mode == GridMode::TwoRoad && j == g.ny);
      for (int i = 1; i < g.nx; ++i) {
        const double x = g.x1(i), y = g.x2(j);
        const double src = -p.D * mc.laplacian(x, y) + lambda * mc.exact(x, y);
        double val;
        if (bottom) {
          // mu*w matching D dv/dn = mu w - nu v with outward normal (0,-1)
          const double mu_w = p.nu * mc.exact(x, 0.0) - p.D * mc.ddx2_bottom(x);
          val = 0.5 * src + mu_w / g.h2;
          if (i == 1) val += 0.5 * ax * mc.exact(g.x1(0), y);
          if (i == g.nx - 1) val += 0.5 * ax * mc.exact(g.x1(g.nx), y);
        } else if (top) {
          const double mu_w = p.nu * mc.exact(x, g.L) + p.D * mc.ddx2_top(x);
          val = 0.5 * src + mu_w / g.h2;
          if (i == 1) val += 0.5 * ax * mc.exact(g.x1(0), y);
          if (i == g.nx - 1) val += 0.5 * ax * mc.exact(g.x1(g.nx), y);
        } else {
          val = src;
          if (i == 1) val += ax * mc.exact(g.x1(0), y);
          if (i == g.nx - 1) val += ax * mc.exact(g.x1(g.nx), y);
          // the bottom road row is an unknown, so only the top boundary can
          // contribute a Dirichlet lift here
          if (!g.is_unknown(i, j + 1)) val += ay * mc.exact(x, g.L);
        }
        b[g.unknown_index(i, j)] = val;
      }
    }
    SolveOptions lin;
    lin.rel_tol = 1e-14;
    const std::vector<double> x = solve_spd(A, b, lin);
    double err = 0.0;
    for (int j = 0; j < g.unknown_rows(); ++j)
      for (int i = 1; i < g.nx; ++i)
        err = std::max(err, std::abs(x[g.unknown_index(i, j)] -
                                     mc.exact(g.x1(i), g.x2(j))));
    res.sup_errors.push_back(err);
  }
  for (size_t i = 1; i < res.sup_errors.size(); ++i)
    res.orders.push_back(std::log2(res.sup_errors[i - 1] / res.sup_errors[i]));
  return res;
}

}  // namespace fieldroad
