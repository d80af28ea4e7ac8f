#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fieldroad {

/// Physical constants of the field-road system.
///
/// D   field diffusivity, Dp road diffusivity, mu/nu exchange rates across
/// the road, ell half-width of the field, Lh field height, m road capacity.
struct ModelParams {
  double D = 1.0;
  double Dp = 1.0;
  double mu = 1.0;
  double nu = 1.0;
  double ell = 1.0;
  double Lh = 1.0;
  double m = 1.0;
};

/// Invariant box cap for the field density: k = (mu/nu)*m.
double box_cap(const ModelParams& p);

enum class ReactionKind { Field, Road };

/// Scalar reaction nonlinearity with a certified Lipschitz bound on its
/// working interval [0, working_max]. The bound is what the shifted solver
/// maps need; it is estimated numerically and inflated, never trusted from
/// the user.
struct Reaction {
  std::string name;
  ReactionKind kind = ReactionKind::Field;
  double working_max = 1.0;
  double lipschitz = 0.0;
  double scale = 1.0;
  std::function<double(double)> eval;

  double operator()(double s) const { return eval(s); }
};

/// Built-in reactions by name: "fisher" and "logistic" are scale*s*(1-s),
/// "zero" is identically 0. The Lipschitz bound is certified on
/// [0, working_max] at construction.
Reaction make_reaction(const std::string& name, ReactionKind kind,
                       double working_max, double scale = 1.0);

/// Sampled Lipschitz estimate: max adjacent difference quotient over
/// n_samples uniform points on [a,b], inflated by 1.1.
/// Throws std::runtime_error naming the sample point on non-finite values.
double lipschitz_bound(const Reaction& r, double a, double b, int n_samples);

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;   // worst violating sample value (0 when clean)
  double where = 0.0;   // sample location of the worst violation
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Checks the standing assumptions on parameters and reactions before any
/// solve: positivity, m >= nu/mu, the sign pattern of f on [0,1] and above,
/// g(0)=0 and g(m)<=0, finite Lipschitz bounds, and that the working
/// intervals cover the solver box. Sign conditions are checked by dense
/// sampling (1e4 points, tolerance 1e-12). Never throws; a failed report
/// blocks downstream solvers at the CLI level.
ValidationReport validate_params(const ModelParams& p, const Reaction& f,
                                 const Reaction& g);

}  // namespace fieldroad
