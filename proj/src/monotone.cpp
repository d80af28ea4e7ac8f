#include "fieldroad/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>

namespace fieldroad {

namespace {

double sup_diff(const FieldFunction& a, const FieldFunction& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  return s;
}

// min over nodes of (next - prev) for an increasing bracket, of (prev - next)
// for a decreasing one; negative values are monotonicity violations
double directed_min_step(const FieldFunction& prev, const FieldFunction& next,
                         int direction) {
  double s = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < prev.values.size(); ++i) {
    const double d = direction * (next.values[i] - prev.values[i]);
    s = std::min(s, d);
  }
  return s;
}

double cross_min(const FieldFunction& lower, const FieldFunction& upper) {
  double s = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < lower.values.size(); ++i)
    s = std::min(s, upper.values[i] - lower.values[i]);
  return s;
}

struct BracketState {
  FieldFunction v;
  int direction = +1;  // +1 from below (increasing), -1 from above
  int sweeps = 0;
  bool converged = false;
  double last_step = std::numeric_limits<double>::infinity();
  bool pending_confirmation = false;
  std::vector<SweepStat> stats;
  std::vector<FieldFunction> history;
};

BracketState make_bracket(FieldFunction start, int direction) {
  BracketState s;
  s.v = std::move(start);
  s.direction = direction;
  return s;
}

class Iterator {
 public:
  Iterator(const FieldProblem& prob, const RoadFunction& w,
           const RoadFunction* w_top, const IterationOptions& opts)
      : prob_(prob),
        w_(w),
        w_top_(w_top),
        opts_(opts),
        A_(assemble_field_operator(prob)) {}

  // One solve of the shifted system; also refreshes box extremes.
  FieldFunction step(const FieldFunction& z) {
    FieldFunction y = apply_S_with(A_, prob_, z, w_, w_top_, opts_.linear);
    box_min_ = std::min(box_min_, y.min_value());
    box_max_ = std::max(box_max_, y.max_value());
    return y;
  }

  // Advances one bracket by one sweep, recording stats and monitoring the
  // monotone direction. Returns false once the bracket is converged.
  bool advance(BracketState& s) {
    if (s.converged) return false;
    FieldFunction next = step(s.v);
    const double step_size = sup_diff(next, s.v);
    const double viol = directed_min_step(s.v, next, s.direction);
    SweepStat st;
    st.sup_step = step_size;
    st.min_violation = viol;
    st.residual = field_residual(prob_, next, w_, w_top_);
    s.stats.push_back(st);
    if (opts_.record_history) s.history.push_back(next);
    if (viol < -10.0 * opts_.sup_tol) {
      std::ostringstream os;
      os << "monotone iteration: ordering violated by " << -viol
         << " at sweep " << s.sweeps + 1
         << " (lambda below the Lipschitz bound, or a broken operator)";
      throw IterationFailure(os.str());
    }
    s.v = std::move(next);
    ++s.sweeps;
    if (step_size < opts_.sup_tol) {
      if (s.pending_confirmation) {
        s.converged = true;
      } else {
        s.pending_confirmation = true;
      }
    } else {
      s.pending_confirmation = false;
    }
    s.last_step = step_size;
    return !s.converged;
  }

  double box_min() const { return box_min_; }
  double box_max() const { return box_max_; }
  double residual(const FieldFunction& v) const {
    return field_residual(prob_, v, w_, w_top_);
  }

 private:
  const FieldProblem& prob_;
  const RoadFunction& w_;
  const RoadFunction* w_top_;
  const IterationOptions& opts_;
  SparseOperator A_;
  double box_min_ = std::numeric_limits<double>::infinity();
  double box_max_ = -std::numeric_limits<double>::infinity();
};

void require_w_in_box(const FieldProblem& prob, const RoadFunction& w,
                      const RoadFunction* w_top) {
  const double slack = 1e-8 * (1.0 + box_cap(prob.params));
  if (w.min_value() < -slack || w.max_value() > prob.params.m + slack)
    throw IterationFailure("min_max_solutions: road datum outside [0, m]");
  if (w_top) {
    const double m_top = (prob.mu_p > 0.0)
                             ? (prob.nu_p / prob.mu_p) * box_cap(prob.params)
                             : 0.0;
    if (w_top->min_value() < -slack || w_top->max_value() > m_top + slack)
      throw IterationFailure("min_max_solutions: top road datum outside [0, m']");
  }
}

void fill_common_report(MonotoneReport& rep, const BracketState& lo,
                        const BracketState& up, const Iterator& it) {
  rep.sweeps_lower = lo.sweeps;
  rep.sweeps_upper = up.sweeps;
  rep.final_step_lower = lo.last_step;
  rep.final_step_upper = up.last_step;
  rep.lower_sweeps = lo.stats;
  rep.upper_sweeps = up.stats;
  double worst = 0.0;
  for (const auto& s : lo.stats) worst = std::min(worst, s.min_violation);
  for (const auto& s : up.stats) worst = std::min(worst, s.min_violation);
  rep.worst_violation = worst;
  rep.box_min = it.box_min();
  rep.box_max = it.box_max();
  rep.lower_iterates = lo.history;
  rep.upper_iterates = up.history;
}

}  // namespace

MinMaxResult min_max_solutions(const FieldProblem& prob, const RoadFunction& w,
                               const IterationOptions& opts,
                               const RoadFunction* w_top) {
  require_w_in_box(prob, w, w_top);
  Iterator it(prob, w, w_top, opts);
  const double k = box_cap(prob.params);

  BracketState lo = make_bracket(FieldFunction::zeros(prob.grid), +1);
  BracketState up = make_bracket(FieldFunction::constant_on_unknowns(prob.grid, k), -1);
  if (opts.record_history) {
    lo.history.push_back(lo.v);
    up.history.push_back(up.v);
  }

  double worst_cross = cross_min(lo.v, up.v);
  int sweep = 0;
  while (!lo.converged || !up.converged) {
    if (++sweep > opts.max_sweeps) {
      std::ostringstream os;
      os << "min_max_solutions: no convergence in " << opts.max_sweeps
         << " sweeps (lower step " << lo.last_step << ", upper step "
         << up.last_step << ")";
      throw IterationFailure(os.str());
    }
    it.advance(lo);
    it.advance(up);
    worst_cross = std::min(worst_cross, cross_min(lo.v, up.v));
    if (worst_cross < -10.0 * opts.sup_tol)
      throw IterationFailure(
          "min_max_solutions: lower bracket crossed above the upper bracket");
  }

  MinMaxResult res{std::move(lo.v), std::move(up.v), {}};
  fill_common_report(res.report, lo, up, it);
  res.report.worst_cross_violation = worst_cross;
  res.report.bracket_gap = sup_diff(res.v_max, res.v_min);
  res.report.residual_lower = it.residual(res.v_min);
  res.report.residual_upper = it.residual(res.v_max);
  return res;
}

SingleResult max_solution_from(const FieldProblem& prob, const RoadFunction& w,
                               const FieldFunction& v_start,
                               const IterationOptions& opts,
                               const RoadFunction* w_top) {
  const auto [ok, viol] = check_subsolution(prob, v_start, w,
                                            10.0 * opts.sup_tol, w_top);
  if (!ok) {
    std::ostringstream os;
    os << "max_solution_from: start is not a discrete subsolution (violation "
       << viol << ")";
    throw IterationFailure(os.str());
  }
  Iterator it(prob, w, w_top, opts);
  BracketState st = make_bracket(v_start, +1);
  if (opts.record_history) st.history.push_back(st.v);
  int sweep = 0;
  while (!st.converged) {
    if (++sweep > opts.max_sweeps)
      throw IterationFailure("max_solution_from: sweep limit exceeded");
    it.advance(st);
  }
  SingleResult res{std::move(st.v), {}};
  BracketState empty = make_bracket(FieldFunction::zeros(prob.grid), -1);
  fill_common_report(res.report, st, empty, it);
  res.report.sweeps_upper = 0;
  res.report.residual_lower = it.residual(res.v);
  res.report.residual_upper = res.report.residual_lower;
  return res;
}

SingleResult max_solution_warm(const FieldProblem& prob, const RoadFunction& w,
                               const FieldFunction* seed,
                               const IterationOptions& opts,
                               const RoadFunction* w_top) {
  Iterator it(prob, w, w_top, opts);
  const double k = box_cap(prob.params);
  BracketState st = make_bracket(FieldFunction::constant_on_unknowns(prob.grid, k), -1);
  bool warm = false;
  if (seed != nullptr) {
    // decide the monotone direction from the first step off the seed
    FieldFunction first = it.step(*seed);
    double up_part = 0.0, down_part = 0.0;
    for (size_t i = 0; i < first.values.size(); ++i) {
      const double d = first.values[i] - seed->values[i];
      up_part = std::max(up_part, d);
      down_part = std::max(down_part, -d);
    }
    const double mixed_tol = 10.0 * opts.sup_tol;
    if (up_part <= mixed_tol || down_part <= mixed_tol) {
      warm = true;
      st.direction = (down_part <= mixed_tol) ? +1 : -1;
      const double step_size = std::max(up_part, down_part);
      SweepStat stat;
      stat.sup_step = step_size;
      stat.min_violation = 0.0;  // direction chosen to match this step
      stat.residual = it.residual(first);
      if (opts.record_history) st.history.push_back(*seed);
      st.stats.push_back(stat);
      st.v = std::move(first);
      st.sweeps = 1;
      st.last_step = step_size;
      st.pending_confirmation = (step_size < opts.sup_tol);
    }
    // mixed-sign first step: fall through to the cold start from k
  }
  if (opts.record_history) st.history.push_back(st.v);
  int sweep = 0;
  while (!st.converged) {
    if (++sweep > opts.max_sweeps)
      throw IterationFailure("max_solution_warm: sweep limit exceeded");
    it.advance(st);
  }
  SingleResult res{std::move(st.v), {}};
  BracketState empty = make_bracket(FieldFunction::zeros(prob.grid), +1);
  fill_common_report(res.report, empty, st, it);
  res.report.warm_started = warm;
  res.report.cold_restarted = (seed != nullptr && !warm);
  res.report.residual_upper = it.residual(res.v);
  res.report.residual_lower = res.report.residual_upper;
  return res;
}

std::pair<bool, double> check_subsolution(const FieldProblem& prob,
                                          const FieldFunction& v,
                                          const RoadFunction& w, double tol,
                                          const RoadFunction* w_top) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double r : field_residual_vector(prob, v, w, w_top))
    worst = std::max(worst, r);
  return {worst <= tol, worst};
}

std::pair<bool, double> check_supersolution(const FieldProblem& prob,
                                            const FieldFunction& v,
                                            const RoadFunction& w, double tol,
                                            const RoadFunction* w_top) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double r : field_residual_vector(prob, v, w, w_top))
    worst = std::max(worst, -r);
  return {worst <= tol, worst};
}

void write_history_csv(const std::vector<SweepStat>& stats,
                       const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(
      std::fopen(path.string().c_str(), "w"), &std::fclose);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::fprintf(f.get(), "sweep,sup_step,min_violation,residual\n");
  for (size_t i = 0; i < stats.size(); ++i)
    std::fprintf(f.get(), "%zu,%.17g,%.17g,%.17g\n", i + 1, stats[i].sup_step,
                 stats[i].min_violation, stats[i].residual);
}

}  // namespace fieldroad
