#include "fieldroad/field.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace fieldroad {

FieldProblem make_field_problem(const ModelParams& p, const Reaction& f,
                                const FieldGrid& grid,
                                std::optional<double> lambda) {
  FieldProblem prob;
  prob.params = p;
  prob.f = f;
  prob.grid = grid;
  prob.lambda = lambda.value_or(f.lipschitz);
  if (prob.lambda < f.lipschitz) {
    std::ostringstream os;
    os << "make_field_problem: lambda " << prob.lambda
       << " below Lipschitz bound " << f.lipschitz;
    throw std::invalid_argument(os.str());
  }
  return prob;
}

SparseOperator assemble_field_operator(const FieldProblem& prob) {
  const FieldGrid& g = prob.grid;
  const ModelParams& p = prob.params;
  const double ax = p.D / (g.h1 * g.h1);
  const double ay = p.D / (g.h2 * g.h2);
  const int rows = g.unknown_rows();
  SparseBuilder builder(g.n_unknowns());

  for (int j = 0; j < rows; ++j) {
    const bool bottom = (j == 0);
    const bool top = (g.mode == GridMode::TwoRoad && j == g.ny);
    for (int i = 1; i < g.nx; ++i) {
      const int idx = g.unknown_index(i, j);
      if (bottom || top) {
        // half-scaled road row: ghost elimination doubled the inward y
        // coupling, the 1/2 scale brings it back to ay and keeps A = A^T
        const double nu_row = bottom ? p.nu : prob.nu_p;
        const double diag = ax + ay + nu_row / g.h2 + 0.5 * prob.lambda;
        const int j_in = bottom ? 1 : g.ny - 1;
        if (bottom) {
          if (i > 1) builder.add(idx, g.unknown_index(i - 1, j), -0.5 * ax);
          builder.add(idx, idx, diag);
          if (i < g.nx - 1) builder.add(idx, g.unknown_index(i + 1, j), -0.5 * ax);
          builder.add(idx, g.unknown_index(i, j_in), -ay);
        } else {
          builder.add(idx, g.unknown_index(i, j_in), -ay);
          if (i > 1) builder.add(idx, g.unknown_index(i - 1, j), -0.5 * ax);
          builder.add(idx, idx, diag);
          if (i < g.nx - 1) builder.add(idx, g.unknown_index(i + 1, j), -0.5 * ax);
        }
      } else {
        const double diag = 2.0 * ax + 2.0 * ay + prob.lambda;
        if (g.is_unknown(i, j - 1)) builder.add(idx, g.unknown_index(i, j - 1), -ay);
        if (i > 1) builder.add(idx, g.unknown_index(i - 1, j), -ax);
        builder.add(idx, idx, diag);
        if (i < g.nx - 1) builder.add(idx, g.unknown_index(i + 1, j), -ax);
        if (g.is_unknown(i, j + 1)) builder.add(idx, g.unknown_index(i, j + 1), -ay);
      }
    }
  }
  SparseOperator A = builder.finish(true);
  check_m_matrix(A);
  return A;
}

std::vector<double> field_rhs(const FieldProblem& prob, const FieldFunction& z,
                              const RoadFunction& w, const RoadFunction* w_top) {
  const FieldGrid& g = prob.grid;
  if (g.mode == GridMode::TwoRoad && w_top == nullptr)
    throw std::invalid_argument("field_rhs: two-road problem needs a top road datum");
  std::vector<double> b(g.n_unknowns());
  for (int j = 0; j < g.unknown_rows(); ++j) {
    const bool bottom = (j == 0);
    const bool top = (g.mode == GridMode::TwoRoad && j == g.ny);
    for (int i = 1; i < g.nx; ++i) {
      const double zi = z.at(i, j);
      const double base = prob.f.eval(zi) + prob.lambda * zi;
      double val = base;
      if (bottom) {
        val = 0.5 * base + (prob.params.mu / g.h2) * w.values[i];
      } else if (top) {
        val = 0.5 * base + (prob.mu_p / g.h2) * w_top->values[i];
      }
      b[g.unknown_index(i, j)] = val;
    }
  }
  return b;
}

namespace {
void warn_out_of_box(const FieldProblem& prob, const FieldFunction& z,
                     const RoadFunction& w, const RoadFunction* w_top) {
  const double k = box_cap(prob.params);
  const double slack = 1e-8 * (1.0 + k);
  if (z.min_value() < -slack || z.max_value() > k + slack)
    std::cerr << "fieldroad: warning: field iterate outside [0, " << k
              << "] by more than " << slack << "\n";
  if (w.min_value() < -slack || w.max_value() > prob.params.m + slack)
    std::cerr << "fieldroad: warning: road datum outside [0, " << prob.params.m
              << "]\n";
  if (w_top) {
    const double m_top = (prob.nu_p > 0.0) ? (prob.nu_p / prob.mu_p) * k
                                           : prob.params.m;
    if (w_top->min_value() < -slack || w_top->max_value() > m_top + slack)
      std::cerr << "fieldroad: warning: top road datum outside [0, " << m_top
                << "]\n";
  }
}
}  // namespace

FieldFunction apply_S(const FieldProblem& prob, const FieldFunction& z,
                      const RoadFunction& w, const SolveOptions& opts) {
  const SparseOperator A = assemble_field_operator(prob);
  return apply_S_with(A, prob, z, w, nullptr, opts);
}

FieldFunction apply_S_with(const SparseOperator& A, const FieldProblem& prob,
                           const FieldFunction& z, const RoadFunction& w,
                           const RoadFunction* w_top, const SolveOptions& opts) {
  warn_out_of_box(prob, z, w, w_top);
  const std::vector<double> b = field_rhs(prob, z, w, w_top);
  const std::vector<double> x = solve_spd(A, b, opts);
  FieldFunction y = FieldFunction::zeros(prob.grid);
  y.set_unknowns(x);
  return y;
}

std::vector<double> field_residual_vector(const FieldProblem& prob,
                                          const FieldFunction& v,
                                          const RoadFunction& w,
                                          const RoadFunction* w_top) {
  const FieldGrid& g = prob.grid;
  if (g.mode == GridMode::TwoRoad && w_top == nullptr)
    throw std::invalid_argument("field_residual: two-road problem needs a top datum");
  const ModelParams& p = prob.params;
  const double ax = p.D / (g.h1 * g.h1);
  const double ay = p.D / (g.h2 * g.h2);
  std::vector<double> r(g.n_unknowns());
  for (int j = 0; j < g.unknown_rows(); ++j) {
    const bool bottom = (j == 0);
    const bool top = (g.mode == GridMode::TwoRoad && j == g.ny);
    for (int i = 1; i < g.nx; ++i) {
      const double vc = v.at(i, j);
      double lhs, rhs;
      if (bottom || top) {
        const double nu_row = bottom ? p.nu : prob.nu_p;
        const double mu_row = bottom ? p.mu : prob.mu_p;
        const double w_row = bottom ? w.values[i] : w_top->values[i];
        const double v_in = bottom ? v.at(i, 1) : v.at(i, g.ny - 1);
        lhs = 0.5 * (-ax) * (v.at(i - 1, j) - 2.0 * vc + v.at(i + 1, j)) -
              ay * (v_in - vc) + (nu_row / g.h2) * vc;
        rhs = 0.5 * prob.f.eval(vc) + (mu_row / g.h2) * w_row;
      } else {
        lhs = -ax * (v.at(i - 1, j) - 2.0 * vc + v.at(i + 1, j)) -
              ay * (v.at(i, j - 1) - 2.0 * vc + v.at(i, j + 1));
        rhs = prob.f.eval(vc);
      }
      r[g.unknown_index(i, j)] = lhs - rhs;
    }
  }
  return r;
}

double field_residual(const FieldProblem& prob, const FieldFunction& v,
                      const RoadFunction& w, const RoadFunction* w_top) {
  double s = 0.0;
  for (double ri : field_residual_vector(prob, v, w, w_top))
    s = std::max(s, std::abs(ri));
  return s;
}

double field_residual_scale(const FieldProblem& prob) {
  const FieldGrid& g = prob.grid;
  const ModelParams& p = prob.params;
  const double ax = p.D / (g.h1 * g.h1);
  const double ay = p.D / (g.h2 * g.h2);
  const double interior = 4.0 * ax + 4.0 * ay + prob.lambda;
  const double road = 2.0 * ax + 2.0 * ay + 0.5 * prob.lambda +
                      std::max(p.nu, prob.nu_p) / g.h2;
  return std::max(interior, road) + prob.f.lipschitz;
}

}  // namespace fieldroad
