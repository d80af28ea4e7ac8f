#include "fieldroad/exhaust.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "fieldroad/eigen.hpp"

namespace fieldroad {

RoadFunction cutoff_rho(const FieldGrid& grid, double ell0) {
  if (grid.ell < ell0 + 1.0 - 1e-12)
    throw std::invalid_argument("cutoff_rho: need ell >= ell0 + 1");
  RoadFunction rho = RoadFunction::zeros(grid);
  for (int i = 0; i <= grid.nx; ++i) {
    const double x = grid.x1(i);
    double val = 0.0;
    if (std::abs(x) <= ell0)
      val = 1.0;
    else if (x > -ell0 - 1.0 && x < -ell0)
      val = x + ell0 + 1.0;
    else if (x > ell0 && x < ell0 + 1.0)
      val = -x + ell0 + 1.0;
    rho.values[i] = val;
  }
  return rho;
}

double localized_energy(const FieldFunction& v, const RoadFunction& rho) {
  const FieldGrid& g = v.grid;
  if (rho.grid.nx != g.nx)
    throw std::invalid_argument("localized_energy: shape mismatch");
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double rmid = 0.5 * (rho.values[i] + rho.values[i + 1]);
      const double dx = (v.at(i + 1, j) - v.at(i, j)) / g.h1;
      const double dy = (v.at(i, j + 1) - v.at(i, j)) / g.h2;
      acc += rmid * rmid * (dx * dx + dy * dy);
    }
  }
  return acc * g.h1 * g.h2;
}

namespace {

struct PerEllResult {
  FieldFunction v_restricted;
  RoadFunction u;  // on the full road; restriction handled via nodes
  double interior_min = 0.0;
  int outer_sweeps = 0;
  double eps_violation = 0.0;
};

double interior_block_min(const FieldFunction& v) {
  const FieldGrid& g = v.grid;
  const double x1_lo = -g.ell / 2.0, x1_hi = g.ell / 2.0;
  const double x2_lo = g.L / 4.0, x2_hi = 3.0 * g.L / 4.0;
  double s = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= g.ny; ++j) {
    const double y = g.x2(j);
    if (y < x2_lo - 1e-12 || y > x2_hi + 1e-12) continue;
    for (int i = 0; i <= g.nx; ++i) {
      const double x = g.x1(i);
      if (x < x1_lo - 1e-12 || x > x1_hi + 1e-12) continue;
      s = std::min(s, v.at(i, j));
    }
  }
  return s;
}

RoadFunction restrict_road(const RoadFunction& u, const FieldGrid& sub) {
  const FieldGrid& g = u.grid;
  const int shift = static_cast<int>(std::lround((g.ell - sub.ell) / g.h1));
  RoadFunction out = RoadFunction::zeros(sub);
  for (int i = 0; i <= sub.nx; ++i) out.values[i] = u.values[i + shift];
  return out;
}

double road_sup_diff(const RoadFunction& a, const RoadFunction& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  return s;
}

double field_sup_diff(const FieldFunction& a, const FieldFunction& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  return s;
}

}  // namespace

GrowthReport domain_growth_study(const ModelParams& p_template,
                                 const Reaction& f, const Reaction& g,
                                 const GrowthStudyConfig& cfg) {
  GrowthReport rep;
  rep.ell0 = cfg.ell0;
  if (cfg.ells.empty())
    throw std::invalid_argument("domain_growth_study: empty half-width list");
  for (size_t i = 0; i < cfg.ells.size(); ++i) {
    if (i > 0 && !(cfg.ells[i] > cfg.ells[i - 1]))
      throw std::invalid_argument("domain_growth_study: ells must increase strictly");
    if (cfg.ells[i] < cfg.ell0 + 1.0 - 1e-12)
      throw std::invalid_argument(
          "domain_growth_study: every ell must be >= ell0 + 1 (cutoff room)");
  }

  const double ell1 = cfg.ells.front();
  const double h1 = 2.0 * ell1 / cfg.nx0;

  // one grid per half-width, identical spacing, even column counts
  std::vector<FieldGrid> grids;
  for (double ell : cfg.ells) {
    const double nx_real = 2.0 * ell / h1;
    const int nx = static_cast<int>(std::lround(nx_real));
    if (std::abs(nx_real - nx) > 1e-9 || nx % 2 != 0) {
      std::ostringstream os;
      os << "domain_growth_study: half-width " << ell
         << " is not node-compatible with spacing " << h1;
      throw std::invalid_argument(os.str());
    }
    FieldGrid grid = build_field_grid(ell, p_template.Lh, nx, cfg.ny);
    grid.h1 = h1;
    grids.push_back(grid);
  }

  ModelParams p1 = p_template;
  p1.ell = ell1;
  if (!kpp_condition(p1, f))
    throw std::runtime_error(
        "domain_growth_study: smallness condition fails at the smallest half-width");
  rep.lambda1_at_smallest = lambda1_closed_form(ell1, p_template.Lh);
  // the amplitude fixed at the smallest half-width (largest eigenvalue)
  // stays admissible on every larger domain
  rep.epsilon = choose_epsilon(p1, f, grids.front());

  auto solve_one = [&](size_t idx) {
    const FieldGrid& grid = grids[idx];
    ModelParams p = p_template;
    p.ell = cfg.ells[idx];
    auto [lower, upper] = solve_coupled(p, f, g, grid, cfg.solver);
    (void)lower;
    PerEllResult out;
    out.interior_min = interior_block_min(upper.v);
    out.outer_sweeps = upper.outer.sweeps;
    const FieldProblem fp = make_field_problem(p, f, grid);
    const EigenPair pair = phi1_exact(grid);
    FieldFunction sub = pair.phi1;
    for (double& val : sub.values) val *= rep.epsilon;
    out.eps_violation =
        check_subsolution(fp, sub, RoadFunction::zeros(grid)).second;
    out.v_restricted = restrict_to(upper.v, cfg.ell0);
    out.u = upper.u;
    return out;
  };

  std::vector<PerEllResult> results(cfg.ells.size());
  const int threads = std::max(1, cfg.max_threads);
  if (threads > 1) {
    std::vector<std::future<PerEllResult>> futures;
    for (size_t i = 0; i < cfg.ells.size(); ++i)
      futures.push_back(std::async(std::launch::async, solve_one, i));
    for (size_t i = 0; i < cfg.ells.size(); ++i) results[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < cfg.ells.size(); ++i) results[i] = solve_one(i);
  }

  const double eps_floor =
      rep.epsilon * std::pow(std::sin(std::numbers::pi / 4.0), 2);
  rep.h1_bounded = true;
  rep.interior_min_ok = true;
  rep.diffs_decreasing = true;
  rep.eps_valid_all = true;

  FieldGrid sub_grid;
  for (size_t i = 0; i < results.size(); ++i) {
    GrowthEntry e;
    e.ell = cfg.ells[i];
    const FieldFunction& vr = results[i].v_restricted;
    sub_grid = vr.grid;
    e.h1_field = norms(vr).H1_semi;
    e.h1_road = road_norms(restrict_road(results[i].u, sub_grid)).H1;
    e.interior_min = results[i].interior_min;
    e.outer_sweeps = results[i].outer_sweeps;
    e.eps_violation = results[i].eps_violation;
    if (i > 0) {
      e.diff_prev = field_sup_diff(vr, results[i - 1].v_restricted);
      e.diff_prev_road = road_sup_diff(restrict_road(results[i].u, sub_grid),
                                       restrict_road(results[i - 1].u, sub_grid));
    }
    rep.entries.push_back(e);
  }

  for (size_t i = 0; i < rep.entries.size(); ++i) {
    const GrowthEntry& e = rep.entries[i];
    std::ostringstream os;
    if (e.h1_field > 1.05 * rep.entries.front().h1_field ||
        e.h1_road > 1.05 * rep.entries.front().h1_road) {
      rep.h1_bounded = false;
      os << "H1 diagnostic grew beyond 5% at ell=" << e.ell;
      rep.failures.push_back(os.str());
    }
    if (e.interior_min < eps_floor - 1e-6) {
      rep.interior_min_ok = false;
      std::ostringstream os2;
      os2 << "interior minimum " << e.interior_min << " below bound "
          << eps_floor << " at ell=" << e.ell;
      rep.failures.push_back(os2.str());
    }
    if (i > 1 && !(rep.entries[i].diff_prev < rep.entries[i - 1].diff_prev)) {
      rep.diffs_decreasing = false;
      std::ostringstream os3;
      os3 << "restriction differences not decreasing at ell=" << e.ell;
      rep.failures.push_back(os3.str());
    }
    if (e.eps_violation > 1e-9) {
      rep.eps_valid_all = false;
      std::ostringstream os4;
      os4 << "eps*phi1 fails the subsolution check at ell=" << e.ell;
      rep.failures.push_back(os4.str());
    }
  }
  return rep;
}

}  // namespace fieldroad
