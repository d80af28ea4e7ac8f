#pragma once

#include <string>
#include <vector>

#include "fieldroad/coupled.hpp"

namespace fieldroad {

/// Growth-study setup: solve on half-widths ells (strictly increasing, each
/// at least ell0 + 1), restrict to the reference subdomain of half-width
/// ell0. nx0 is the column count at the smallest half-width; every larger
/// domain reuses the same spacing, so restrictions are exact node copies.
struct GrowthStudyConfig {
  double ell0 = 0.0;
  std::vector<double> ells;
  int nx0 = 0;
  int ny = 0;
  OuterOptions solver;
  int max_threads = 1;  // per-ell solves are independent
};

struct GrowthEntry {
  double ell = 0.0;
  double h1_field = 0.0;      // H1 seminorm of v restricted to the subdomain
  double h1_road = 0.0;       // full H1 norm of u restricted to the subdomain
  double interior_min = 0.0;  // min of v over [-ell/2, ell/2] x [L/4, 3L/4]
  double diff_prev = -1.0;    // sup difference of successive v restrictions
  double diff_prev_road = -1.0;
  int outer_sweeps = 0;
  double eps_violation = 0.0;  // subsolution check of eps*phi1 at this ell
};

struct GrowthReport {
  double ell0 = 0.0;
  double epsilon = 0.0;   // fixed at the smallest half-width
  double lambda1_at_smallest = 0.0;
  std::vector<GrowthEntry> entries;
  bool h1_bounded = false;        // both H1 diagnostics within 5% of entry 0
  bool interior_min_ok = false;   // each >= epsilon*sin^2(pi/4) - 1e-6
  bool diffs_decreasing = false;  // successive restriction sup-diffs shrink
  bool eps_valid_all = false;     // eps*phi1 is a subsolution at every ell
  std::vector<std::string> failures;
  bool all_passed() const { return failures.empty(); }
};

/// Trapezoid cutoff: 1 on |x1| <= ell0, linear down to 0 at |x1| = ell0+1,
/// 0 beyond. Requires ell >= ell0 + 1.
RoadFunction cutoff_rho(const FieldGrid& grid, double ell0);

/// Discrete integral of rho^2 |grad v|^2 over cells (midpoint rho weight).
double localized_energy(const FieldFunction& v, const RoadFunction& rho);

/// Runs the coupled upper bracket at every half-width, restricts to the
/// reference subdomain, and verifies the uniform-bound and interior
/// lower-bound diagnostics. p_template supplies everything but ell.
GrowthReport domain_growth_study(const ModelParams& p_template,
                                 const Reaction& f, const Reaction& g,
                                 const GrowthStudyConfig& cfg);

}  // namespace fieldroad
