#include "fieldroad/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "fieldroad/coupled.hpp"
#include "fieldroad/eigen.hpp"
#include "fieldroad/exhaust.hpp"
#include "fieldroad/oracle.hpp"
#include "fieldroad/tworoad.hpp"

namespace fieldroad {

namespace {

using nlohmann::json;

json to_json(const ValidationReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"worst", c.worst},
                      {"where", c.where},
                      {"detail", c.detail}});
  }
  return {{"all_passed", rep.all_passed()}, {"checks", checks}};
}

json to_json(const FieldNorms& n) {
  return {{"sup", n.sup}, {"L2", n.L2}, {"H1_semi", n.H1_semi}};
}

json to_json(const RoadNorms& n) {
  return {{"sup", n.sup}, {"L2", n.L2}, {"H1", n.H1}};
}

json to_json(const OuterReport& r) {
  return {{"sweeps", r.sweeps},
          {"final_step", r.final_step},
          {"worst_monotonicity_violation", r.worst_monotonicity_violation},
          {"u_min", r.u_min},
          {"u_max", r.u_max},
          {"inner_sweeps_total", r.inner_sweeps_total},
          {"inner_worst_violation", r.inner_worst_violation},
          {"inner_box_min", r.inner_box_min},
          {"inner_box_max", r.inner_box_max}};
}

void write_json(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << doc.dump(2) << "\n";
}

Reaction build_field_reaction(const RunConfig& cfg) {
  return make_reaction(cfg.f.name, ReactionKind::Field, box_cap(cfg.params),
                       cfg.f.scale);
}

Reaction build_road_reaction(const ReactionSpec& spec, double cap) {
  return make_reaction(spec.name, ReactionKind::Road, cap, spec.scale);
}

OuterOptions outer_options(const RunConfig& cfg) {
  OuterOptions opts;
  opts.outer_tol = cfg.solver.outer_tol;
  opts.inner.sup_tol = cfg.solver.sup_tol;
  opts.inner.max_sweeps = cfg.solver.max_sweeps;
  opts.inner.linear.rel_tol = cfg.solver.cg_tol;
  return opts;
}

json config_echo(const RunConfig& cfg) {
  json params = {{"D", cfg.params.D},   {"Dprime", cfg.params.Dp},
                 {"mu", cfg.params.mu}, {"nu", cfg.params.nu},
                 {"ell", cfg.params.ell}, {"L", cfg.params.Lh},
                 {"m", cfg.params.m},   {"k", box_cap(cfg.params)}};
  if (cfg.two_road) {
    params["Dsecond"] = cfg.Dsecond;
    params["mu_p"] = cfg.mu_p;
    params["nu_p"] = cfg.nu_p;
  }
  return {{"params", params},
          {"grid", {{"nx", cfg.nx}, {"ny", cfg.ny}}},
          {"solver",
           {{"sup_tol", cfg.solver.sup_tol},
            {"outer_tol", cfg.solver.outer_tol},
            {"cg_tol", cfg.solver.cg_tol},
            {"max_sweeps", cfg.solver.max_sweeps}}},
          {"reactions",
           {{"f", cfg.f.name}, {"g", cfg.g.name}, {"h", cfg.h.name}}}};
}

json eigen_block(const ModelParams& p, const Reaction& f, const FieldGrid& grid,
                 double* eps_out) {
  json block;
  block["lambda1_closed"] = lambda1_closed_form(p.ell, p.Lh);
  const bool kpp = kpp_condition(p, f);
  block["kpp_pass"] = kpp;
  double eps = 0.0;
  if (kpp && grid.nx % 2 == 0 && grid.ny % 2 == 0) {
    eps = choose_epsilon(p, f, grid);
    block["epsilon"] = eps;
  } else {
    block["epsilon"] = nullptr;
  }
  if (eps_out) *eps_out = eps;
  return block;
}

int solve_one_road(const RunConfig& cfg, json& summary) {
  const FieldGrid grid =
      build_field_grid(cfg.params.ell, cfg.params.Lh, cfg.nx, cfg.ny);
  const Reaction f = build_field_reaction(cfg);
  const Reaction g = build_road_reaction(cfg.g, cfg.params.m);

  const ValidationReport val = validate_params(cfg.params, f, g);
  summary["validation"] = to_json(val);
  if (!val.all_passed()) return 2;

  double eps = 0.0;
  summary["eigen"] = eigen_block(cfg.params, f, grid, &eps);
  if (!summary["eigen"]["kpp_pass"].get<bool>())
    std::cerr << "fieldroad: warning: smallness condition fails; expect the "
                 "trivial steady state\n";

  const OuterOptions opts = outer_options(cfg);
  auto [lower, upper] = solve_coupled(cfg.params, f, g, grid, opts);

  const auto flags_up = nontriviality_check(upper, eps, opts.inner.sup_tol);
  const auto flags_lo = nontriviality_check(lower, eps, opts.inner.sup_tol);

  write_road_csv(upper.u, cfg.out_dir / "u.csv");
  write_field_csv(upper.v, cfg.out_dir / "v.csv");
  write_road_csv(lower.u, cfg.out_dir / "u_lower.csv");
  write_field_csv(lower.v, cfg.out_dir / "v_lower.csv");

  auto bracket_json = [](const CoupledSolution& sol, const NontrivialFlags& fl) {
    return json{{"outer", to_json(sol.outer)},
                {"residual_field", sol.residual_field},
                {"residual_road", sol.residual_road},
                {"u_norms", to_json(road_norms(sol.u))},
                {"v_norms", to_json(norms(sol.v))},
                {"u_nontrivial", fl.u_nontrivial},
                {"v_nontrivial", fl.v_nontrivial}};
  };
  summary["brackets"] = {{"lower", bracket_json(lower, flags_lo)},
                         {"upper", bracket_json(upper, flags_up)}};
  summary["u_nontrivial"] = flags_up.u_nontrivial;
  summary["v_nontrivial"] = flags_up.v_nontrivial;
  summary["outputs"] = {{"u_csv", "u.csv"},
                        {"v_csv", "v.csv"},
                        {"u_lower_csv", "u_lower.csv"},
                        {"v_lower_csv", "v_lower.csv"}};
  return 0;
}

int solve_two_roads(const RunConfig& cfg, json& summary) {
  const FieldGrid grid = build_field_grid(cfg.params.ell, cfg.params.Lh, cfg.nx,
                                          cfg.ny, GridMode::TwoRoad);
  const TwoRoadParams p2 =
      make_two_road_params(cfg.params, cfg.Dsecond, cfg.mu_p, cfg.nu_p);
  const Reaction f = build_field_reaction(cfg);
  const Reaction g = build_road_reaction(cfg.g, cfg.params.m);
  const Reaction h = build_road_reaction(cfg.h, p2.m_p);

  const ValidationReport val = validate_two_road(p2, f, g, h);
  summary["validation"] = to_json(val);
  summary["derived"] = {{"m_p", p2.m_p}, {"k", box_cap(cfg.params)}};
  if (!val.all_passed()) return 2;

  double eps = 0.0;
  summary["eigen"] = eigen_block(cfg.params, f, grid, &eps);

  const OuterOptions opts = outer_options(cfg);
  auto [lower, upper] = solve_two_road(p2, f, g, h, grid, opts);

  const auto flags_up = nontriviality_check2(upper, eps, opts.inner.sup_tol);
  const auto flags_lo = nontriviality_check2(lower, eps, opts.inner.sup_tol);

  write_road_csv(upper.u, cfg.out_dir / "u.csv");
  write_field_csv(upper.v, cfg.out_dir / "v.csv");
  write_road_csv(upper.w, cfg.out_dir / "w.csv");
  write_road_csv(lower.u, cfg.out_dir / "u_lower.csv");
  write_field_csv(lower.v, cfg.out_dir / "v_lower.csv");
  write_road_csv(lower.w, cfg.out_dir / "w_lower.csv");

  auto bracket_json = [](const TwoRoadSolution& sol, const TwoRoadFlags& fl) {
    return json{{"outer", to_json(sol.outer)},
                {"residual_field", sol.residual_field},
                {"residual_road_bottom", sol.residual_road_bottom},
                {"residual_road_top", sol.residual_road_top},
                {"u_norms", to_json(road_norms(sol.u))},
                {"v_norms", to_json(norms(sol.v))},
                {"w_norms", to_json(road_norms(sol.w))},
                {"u_nontrivial", fl.u_nontrivial},
                {"v_nontrivial", fl.v_nontrivial},
                {"w_nontrivial", fl.w_nontrivial}};
  };
  summary["brackets"] = {{"lower", bracket_json(lower, flags_lo)},
                         {"upper", bracket_json(upper, flags_up)}};
  summary["u_nontrivial"] = flags_up.u_nontrivial;
  summary["v_nontrivial"] = flags_up.v_nontrivial;
  summary["w_nontrivial"] = flags_up.w_nontrivial;
  summary["outputs"] = {{"u_csv", "u.csv"}, {"v_csv", "v.csv"},
                        {"w_csv", "w.csv"}};
  return 0;
}

}  // namespace

int run_solve(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  json summary = config_echo(cfg);
  summary["command"] = "solve";
  summary["mode"] = cfg.two_road ? "two" : "one";
  int code = 0;
  try {
    code = cfg.two_road ? solve_two_roads(cfg, summary)
                        : solve_one_road(cfg, summary);
  } catch (const std::exception& e) {
    std::cerr << "fieldroad: " << e.what() << "\n";
    summary["error"] = e.what();
    write_json(summary, cfg.out_dir / "summary.json");
    return 3;
  }
  write_json(summary, cfg.out_dir / "summary.json");
  std::cout << (cfg.out_dir / "summary.json").string() << "\n";
  return code;
}

int run_eigen(double ell, double L, int nx, int ny, double D,
              const std::string& f_name) {
  ModelParams p;
  p.D = D;
  p.ell = ell;
  p.Lh = L;
  const FieldGrid grid = build_field_grid(ell, L, nx, ny);
  const Reaction f = make_reaction(f_name, ReactionKind::Field, box_cap(p));
  json out;
  out["lambda1_closed"] = lambda1_closed_form(ell, L);
  out["lambda1_discrete"] = discrete_lambda1(grid);
  const bool kpp = kpp_condition(p, f);
  out["kpp_pass"] = kpp;
  if (kpp && nx % 2 == 0 && ny % 2 == 0)
    out["epsilon"] = choose_epsilon(p, f, grid);
  else
    out["epsilon"] = nullptr;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_grow(const RunConfig& cfg) {
  if (!cfg.growth) {
    std::cerr << "fieldroad: grow needs a 'growth' block in the config\n";
    return 2;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const Reaction f = build_field_reaction(cfg);
  const Reaction g = build_road_reaction(cfg.g, cfg.params.m);
  const ValidationReport val = validate_params(cfg.params, f, g);
  if (!val.all_passed()) {
    std::cerr << "fieldroad: parameter validation failed\n";
    return 2;
  }

  GrowthStudyConfig study;
  study.ell0 = cfg.growth->ell0;
  study.ells = cfg.growth->ells;
  study.nx0 = cfg.nx;
  study.ny = cfg.ny;
  study.solver = outer_options(cfg);
  study.max_threads = max_threads_from_env();

  GrowthReport rep;
  try {
    rep = domain_growth_study(cfg.params, f, g, study);
  } catch (const std::exception& e) {
    std::cerr << "fieldroad: " << e.what() << "\n";
    return 3;
  }

  {
    std::ofstream csv(cfg.out_dir / "growth.csv");
    csv << "ell,h1_field,h1_road,interior_min,diff_prev\n";
    char buf[256];
    for (const auto& e : rep.entries) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,", e.ell,
                    e.h1_field, e.h1_road, e.interior_min);
      csv << buf;
      if (e.diff_prev >= 0.0) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.diff_prev);
        csv << buf;
      }
      csv << "\n";
    }
  }

  json entries = json::array();
  for (const auto& e : rep.entries) {
    json je = {{"ell", e.ell},
               {"h1_field", e.h1_field},
               {"h1_road", e.h1_road},
               {"interior_min", e.interior_min},
               {"outer_sweeps", e.outer_sweeps},
               {"eps_violation", e.eps_violation}};
    if (e.diff_prev >= 0.0) {
      je["diff_prev"] = e.diff_prev;
      je["diff_prev_road"] = e.diff_prev_road;
    }
    entries.push_back(je);
  }
  json summary = {{"command", "grow"},
                  {"ell0", rep.ell0},
                  {"epsilon", rep.epsilon},
                  {"lambda1_at_smallest", rep.lambda1_at_smallest},
                  {"entries", entries},
                  {"h1_bounded", rep.h1_bounded},
                  {"interior_min_ok", rep.interior_min_ok},
                  {"diffs_decreasing", rep.diffs_decreasing},
                  {"eps_valid_all", rep.eps_valid_all},
                  {"failures", rep.failures},
                  {"all_passed", rep.all_passed()}};
  write_json(summary, cfg.out_dir / "summary.json");
  std::cout << (cfg.out_dir / "summary.json").string() << "\n";
  return rep.all_passed() ? 0 : 3;
}

int run_validate(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const ModelParams& p = cfg.params;
  const Reaction f = build_field_reaction(cfg);
  const Reaction g = build_road_reaction(cfg.g, p.m);
  json checks = json::array();
  bool all = true;
  auto push = [&](const std::string& name, bool pass, double value) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}});
    all = all && pass;
  };

  const ValidationReport val = validate_params(p, f, g);
  push("assumptions", val.all_passed(), 0.0);

  try {
    // iterative vs dense reference on a tiny grid
    {
      const FieldGrid grid = build_field_grid(p.ell, p.Lh, 6, 6);
      const FieldProblem prob = make_field_problem(p, f, grid);
      const FieldFunction z =
          FieldFunction::constant_on_unknowns(grid, 0.5 * box_cap(p));
      const RoadFunction w = RoadFunction::constant(grid, 0.5 * p.m);
      const FieldFunction it = apply_S(prob, z, w);
      const FieldFunction ref = dense_reference_solve(prob, z, w);
      double diff = 0.0;
      for (size_t i = 0; i < it.values.size(); ++i)
        diff = std::max(diff, std::abs(it.values[i] - ref.values[i]));
      push("dense_reference_agreement", diff <= 1e-9, diff);
    }
    // manufactured second order
    {
      const int grids[] = {16, 32, 64};
      const ConvergenceResult conv =
          manufactured_convergence(p, sinsin_case(p.ell, p.Lh), grids, 1.0);
      double min_order = 1e9;
      for (double o : conv.orders) min_order = std::min(min_order, o);
      push("manufactured_order", min_order >= 1.8, min_order);
      push("manufactured_errors_decrease",
           conv.sup_errors.front() > conv.sup_errors.back(),
           conv.sup_errors.back());
    }
    // stencil exactness on degree-one data
    {
      const int grids[] = {6};
      ModelParams small = p;
      small.ell = 1.0;
      small.Lh = 1.0;
      const ConvergenceResult conv =
          manufactured_convergence(small, bilinear_case(), grids, 1.0);
      push("stencil_exactness", conv.sup_errors.front() <= 1e-12,
           conv.sup_errors.front());
    }
    // relaxation oracle against the fixed-point path
    {
      const FieldGrid grid = build_field_grid(p.ell, p.Lh, 32, 16);
      const OuterOptions opts = outer_options(cfg);
      auto [lower, upper] = solve_coupled(p, f, g, grid, opts);
      (void)lower;
      ParabolicOptions popt;
      popt.t_end = 20000.0;
      ParabolicResult relax = parabolic_relax(
          p, f, g, RoadFunction::constant(grid, p.m),
          FieldFunction::constant_on_unknowns(grid, box_cap(p)), popt);
      double diff = 0.0;
      for (size_t i = 0; i < relax.v.values.size(); ++i)
        diff = std::max(diff, std::abs(relax.v.values[i] - upper.v.values[i]));
      for (size_t i = 0; i < relax.u.values.size(); ++i)
        diff = std::max(diff, std::abs(relax.u.values[i] - upper.u.values[i]));
      push("relaxation_agreement", relax.reached_steady && diff <= 1e-6, diff);
      const double k = box_cap(p);
      const bool boxed = upper.v.min_value() >= -1e-9 &&
                         upper.v.max_value() <= k + 1e-9 &&
                         upper.u.min_value() >= -1e-9 &&
                         upper.u.max_value() <= p.m + 1e-9;
      push("solution_box", boxed, upper.v.max_value());
    }
  } catch (const std::exception& e) {
    std::cerr << "fieldroad: " << e.what() << "\n";
    push("oracle_exception", false, 0.0);
  }

  json summary = {{"command", "validate"},
                  {"validation", to_json(val)},
                  {"checks", checks},
                  {"all_passed", all}};
  write_json(summary, cfg.out_dir / "validate.json");
  std::cout << (cfg.out_dir / "validate.json").string() << "\n";
  return all ? 0 : 3;
}

int run_field_only(const RunConfig& cfg, const std::string& w_spec) {
  std::filesystem::create_directories(cfg.out_dir);
  const FieldGrid grid =
      build_field_grid(cfg.params.ell, cfg.params.Lh, cfg.nx, cfg.ny);
  const Reaction f = build_field_reaction(cfg);
  const Reaction g = build_road_reaction(cfg.g, cfg.params.m);
  const ValidationReport val = validate_params(cfg.params, f, g);
  if (!val.all_passed()) {
    std::cerr << "fieldroad: parameter validation failed\n";
    return 2;
  }

  RoadFunction w = RoadFunction::zeros(grid);
  if (w_spec == "zero") {
  } else if (w_spec.rfind("const:", 0) == 0) {
    w = RoadFunction::constant(grid, std::stod(w_spec.substr(6)));
  } else if (w_spec.rfind("csv:", 0) == 0) {
    w = read_road_csv(grid, w_spec.substr(4));
  } else {
    std::cerr << "fieldroad: --w expects zero, const:<v> or csv:<path>\n";
    return 2;
  }

  const FieldProblem prob = make_field_problem(cfg.params, f, grid);
  IterationOptions opts;
  opts.sup_tol = cfg.solver.sup_tol;
  opts.max_sweeps = cfg.solver.max_sweeps;
  opts.linear.rel_tol = cfg.solver.cg_tol;
  opts.record_history = true;

  MinMaxResult mm;
  try {
    mm = min_max_solutions(prob, w, opts);
  } catch (const std::exception& e) {
    std::cerr << "fieldroad: " << e.what() << "\n";
    return 3;
  }

  write_field_csv(mm.v_min, cfg.out_dir / "vmin.csv");
  write_field_csv(mm.v_max, cfg.out_dir / "vmax.csv");
  write_history_csv(mm.report.lower_sweeps, cfg.out_dir / "history_lower.csv");
  write_history_csv(mm.report.upper_sweeps, cfg.out_dir / "history_upper.csv");

  json summary = {{"command", "field-only"},
                  {"validation", to_json(val)},
                  {"w", w_spec},
                  {"sweeps_lower", mm.report.sweeps_lower},
                  {"sweeps_upper", mm.report.sweeps_upper},
                  {"bracket_gap", mm.report.bracket_gap},
                  {"worst_violation", mm.report.worst_violation},
                  {"worst_cross_violation", mm.report.worst_cross_violation},
                  {"box_min", mm.report.box_min},
                  {"box_max", mm.report.box_max},
                  {"residual_lower", mm.report.residual_lower},
                  {"residual_upper", mm.report.residual_upper},
                  {"vmin_norms", to_json(norms(mm.v_min))},
                  {"vmax_norms", to_json(norms(mm.v_max))}};
  write_json(summary, cfg.out_dir / "summary.json");
  std::cout << (cfg.out_dir / "summary.json").string() << "\n";
  return 0;
}

}  // namespace fieldroad
