#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fieldroad/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Steady states of the coupled field-road reaction-diffusion system"};
  app.require_subcommand(1);

  std::string config_path;
  bool force_two_road = false;
  auto* solve = app.add_subcommand(
      "solve", "Solve the coupled system (both monotone brackets)");
  solve->add_option("--config", config_path, "JSON run configuration")
      ->required();
  solve->add_flag("--two-road", force_two_road,
                  "Solve the two-road variant (config must carry the primed "
                  "parameters)");

  double e_ell = 0.0, e_L = 0.0, e_D = 1.0;
  int e_nx = 32, e_ny = 32;
  std::string e_f = "fisher";
  auto* eigen = app.add_subcommand(
      "eigen", "Principal eigenvalue, discrete check, and the subsolution "
               "amplitude");
  eigen->add_option("--ell", e_ell, "Half-width of the field")->required();
  eigen->add_option("--L", e_L, "Height of the field")->required();
  eigen->add_option("--nx", e_nx, "Columns of the check grid");
  eigen->add_option("--ny", e_ny, "Rows of the check grid");
  eigen->add_option("--D", e_D, "Field diffusivity");
  eigen->add_option("--f", e_f, "Field reaction name");

  std::string grow_config;
  auto* grow = app.add_subcommand(
      "grow", "Domain-growth study toward the unbounded strip");
  grow->add_option("--config", grow_config, "JSON run configuration")
      ->required();

  std::string validate_config;
  auto* validate =
      app.add_subcommand("validate", "Run the independent oracle suite");
  validate->add_option("--config", validate_config, "JSON run configuration")
      ->required();

  std::string fo_config, fo_w = "zero";
  auto* field_only = app.add_subcommand(
      "field-only", "Minimal/maximal field solutions for a fixed road datum");
  field_only->add_option("--config", fo_config, "JSON run configuration")
      ->required();
  field_only->add_option("--w", fo_w,
                         "Road datum: zero, const:<value> or csv:<path>");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      fieldroad::RunConfig cfg = fieldroad::load_config(config_path);
      if (force_two_road && !cfg.two_road) {
        std::cerr << "fieldroad: --two-road requires mode \"two\" in the "
                     "config (with Dsecond, mu_p, nu_p)\n";
        return 2;
      }
      return fieldroad::run_solve(cfg);
    }
    if (*eigen) return fieldroad::run_eigen(e_ell, e_L, e_nx, e_ny, e_D, e_f);
    if (*grow) return fieldroad::run_grow(fieldroad::load_config(grow_config));
    if (*validate)
      return fieldroad::run_validate(fieldroad::load_config(validate_config));
    if (*field_only)
      return fieldroad::run_field_only(fieldroad::load_config(fo_config), fo_w);
  } catch (const fieldroad::ConfigError& e) {
    std::cerr << "fieldroad: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fieldroad: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
