#include "fieldroad/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include <json.hpp>

namespace fieldroad {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

double require_number(const json& obj, const std::string& key,
                      const std::string& where) {
  if (!obj.contains(key))
    throw ConfigError("config: missing key '" + key + "' in " + where);
  if (!obj[key].is_number())
    throw ConfigError("config: key '" + key + "' in " + where +
                      " must be a number");
  return obj[key].get<double>();
}

double optional_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<double>();
}

ReactionSpec parse_reaction(const json& val, const std::string& where) {
  ReactionSpec spec;
  if (val.is_string()) {
    spec.name = val.get<std::string>();
  } else if (val.is_object()) {
    reject_unknown_keys(val, {"name", "scale"}, where);
    if (!val.contains("name"))
      throw ConfigError("config: missing key 'name' in " + where);
    spec.name = val["name"].get<std::string>();
    spec.scale = optional_number(val, "scale", 1.0);
  } else {
    throw ConfigError("config: " + where + " must be a name or an object");
  }
  if (spec.name != "fisher" && spec.name != "logistic" && spec.name != "zero")
    throw ConfigError("config: unknown reaction '" + spec.name + "' in " +
                      where);
  return spec;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  reject_unknown_keys(root, {"params", "reactions", "grid", "solver", "mode",
                             "growth", "output"},
                      "top level");

  RunConfig cfg;

  if (root.contains("mode")) {
    const std::string mode = root["mode"].get<std::string>();
    if (mode == "one")
      cfg.two_road = false;
    else if (mode == "two")
      cfg.two_road = true;
    else
      throw ConfigError("config: mode must be 'one' or 'two'");
  }

  if (!root.contains("params"))
    throw ConfigError("config: missing key 'params'");
  const json& pj = root["params"];
  reject_unknown_keys(pj, {"D", "Dprime", "Dsecond", "mu", "nu", "mu_p",
                           "nu_p", "ell", "L", "m"},
                      "params");
  cfg.params.D = require_number(pj, "D", "params");
  cfg.params.Dp = require_number(pj, "Dprime", "params");
  cfg.params.mu = require_number(pj, "mu", "params");
  cfg.params.nu = require_number(pj, "nu", "params");
  cfg.params.ell = require_number(pj, "ell", "params");
  cfg.params.Lh = require_number(pj, "L", "params");
  cfg.params.m =
      optional_number(pj, "m", std::max(1.0, cfg.params.nu / cfg.params.mu));
  if (cfg.two_road) {
    cfg.Dsecond = require_number(pj, "Dsecond", "params");
    cfg.mu_p = require_number(pj, "mu_p", "params");
    cfg.nu_p = require_number(pj, "nu_p", "params");
  } else if (pj.contains("Dsecond") || pj.contains("mu_p") ||
             pj.contains("nu_p")) {
    throw ConfigError("config: two-road params present but mode is 'one'");
  }

  if (root.contains("reactions")) {
    const json& rj = root["reactions"];
    reject_unknown_keys(rj, {"f", "g", "h"}, "reactions");
    if (rj.contains("f")) cfg.f = parse_reaction(rj["f"], "reactions.f");
    if (rj.contains("g")) cfg.g = parse_reaction(rj["g"], "reactions.g");
    if (rj.contains("h")) cfg.h = parse_reaction(rj["h"], "reactions.h");
  }
  if (!cfg.two_road) cfg.h = ReactionSpec{"zero", 1.0};

  if (root.contains("grid")) {
    const json& gj = root["grid"];
    reject_unknown_keys(gj, {"nx", "ny"}, "grid");
    cfg.nx = static_cast<int>(require_number(gj, "nx", "grid"));
    cfg.ny = static_cast<int>(require_number(gj, "ny", "grid"));
    if (cfg.nx < 4 || cfg.ny < 4)
      throw ConfigError("config: grid.nx and grid.ny must be at least 4");
  }

  if (root.contains("solver")) {
    const json& sj = root["solver"];
    reject_unknown_keys(sj, {"sup_tol", "outer_tol", "cg_tol", "max_sweeps"},
                        "solver");
    cfg.solver.sup_tol = optional_number(sj, "sup_tol", cfg.solver.sup_tol);
    cfg.solver.outer_tol = optional_number(sj, "outer_tol", cfg.solver.outer_tol);
    cfg.solver.cg_tol = optional_number(sj, "cg_tol", cfg.solver.cg_tol);
    cfg.solver.max_sweeps = static_cast<int>(
        optional_number(sj, "max_sweeps", cfg.solver.max_sweeps));
    if (!(cfg.solver.sup_tol > 0.0) || !(cfg.solver.outer_tol > 0.0) ||
        !(cfg.solver.cg_tol > 0.0))
      throw ConfigError("config: solver tolerances must be positive");
  }

  if (root.contains("growth")) {
    const json& gj = root["growth"];
    reject_unknown_keys(gj, {"ell0", "ells"}, "growth");
    GrowthBlock gb;
    gb.ell0 = require_number(gj, "ell0", "growth");
    if (!gj.contains("ells") || !gj["ells"].is_array())
      throw ConfigError("config: growth.ells must be an array");
    for (const auto& e : gj["ells"]) gb.ells.push_back(e.get<double>());
    cfg.growth = gb;
  }

  if (root.contains("output")) {
    const json& oj = root["output"];
    reject_unknown_keys(oj, {"dir"}, "output");
    if (oj.contains("dir")) cfg.out_dir = oj["dir"].get<std::string>();
  }
  return cfg;
}

int max_threads_from_env() {
  const char* raw = std::getenv("FIELDROAD_MAX_THREADS");
  if (raw == nullptr) return 1;
  const int n = std::atoi(raw);
  return n > 0 ? n : 1;
}

}  // namespace fieldroad
