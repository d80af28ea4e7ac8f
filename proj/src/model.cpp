#include "fieldroad/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fieldroad {

namespace {
constexpr int kValidationSamples = 10000;
constexpr double kSignTol = 1e-12;
}  // namespace

double box_cap(const ModelParams& p) { return (p.mu / p.nu) * p.m; }

Reaction make_reaction(const std::string& name, ReactionKind kind,
                       double working_max, double scale) {
  Reaction r;
  r.name = name;
  r.kind = kind;
  r.working_max = working_max;
  r.scale = scale;
  if (name == "fisher" || name == "logistic") {
    r.eval = [scale](double s) { return scale * s * (1.0 - s); };
  } else if (name == "zero") {
    r.eval = [](double) { return 0.0; };
  } else {
    throw std::invalid_argument("unknown reaction '" + name +
                                "' (expected fisher|logistic|zero)");
  }
  r.lipschitz = lipschitz_bound(r, 0.0, working_max, kValidationSamples);
  return r;
}

double lipschitz_bound(const Reaction& r, double a, double b, int n_samples) {
  if (!(a < b)) throw std::invalid_argument("lipschitz_bound: need a < b");
  if (n_samples < 2) throw std::invalid_argument("lipschitz_bound: need n_samples >= 2");
  const double h = (b - a) / (n_samples - 1);
  double prev = r.eval(a);
  if (!std::isfinite(prev)) {
    std::ostringstream os;
    os << "reaction '" << r.name << "' non-finite at s=" << a;
    throw std::runtime_error(os.str());
  }
  double worst = 0.0;
  for (int i = 1; i < n_samples; ++i) {
    const double s = a + i * h;
    const double cur = r.eval(s);
    if (!std::isfinite(cur)) {
      std::ostringstream os;
      os << "reaction '" << r.name << "' non-finite at s=" << s;
      throw std::runtime_error(os.str());
    }
    worst = std::max(worst, std::abs(cur - prev) / h);
    prev = cur;
  }
  return 1.1 * worst;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

CheckResult scalar_check(const std::string& name, bool pass, double worst,
                         double where, const std::string& detail) {
  return CheckResult{name, pass, worst, where, detail};
}

// Worst violation of value <= 0 over uniform samples of r on (lo, hi].
CheckResult nonpositive_on(const std::string& name, const Reaction& r,
                           double lo, double hi, const std::string& detail) {
  CheckResult c{name, true, 0.0, lo, detail};
  if (!(hi > lo)) return c;  // empty range: vacuously true
  for (int i = 1; i <= kValidationSamples; ++i) {
    const double s = lo + (hi - lo) * i / kValidationSamples;
    const double val = r.eval(s);
    if (val > kSignTol && val > c.worst) {
      c.worst = val;
      c.where = s;
      c.pass = false;
    }
  }
  return c;
}

CheckResult positive_on_open(const std::string& name, const Reaction& r,
                             double lo, double hi, const std::string& detail) {
  CheckResult c{name, true, 0.0, lo, detail};
  for (int i = 1; i < kValidationSamples; ++i) {
    const double s = lo + (hi - lo) * i / kValidationSamples;
    const double val = r.eval(s);
    if (val < -kSignTol && val < c.worst) {
      c.worst = val;
      c.where = s;
      c.pass = false;
    }
  }
  return c;
}

}  // namespace

ValidationReport validate_params(const ModelParams& p, const Reaction& f,
                                 const Reaction& g) {
  ValidationReport rep;
  auto& checks = rep.checks;

  const double positives[] = {p.D, p.Dp, p.mu, p.nu, p.ell, p.Lh, p.m};
  const char* names[] = {"D", "Dp", "mu", "nu", "ell", "Lh", "m"};
  bool all_pos = true;
  std::string bad;
  double bad_val = 0.0;
  for (int i = 0; i < 7; ++i) {
    if (!(positives[i] > 0.0) || !std::isfinite(positives[i])) {
      all_pos = false;
      bad = names[i];
      bad_val = positives[i];
      break;
    }
  }
  checks.push_back(scalar_check("positivity", all_pos, bad_val, 0.0,
                                all_pos ? "all parameters > 0"
                                        : "parameter " + bad + " not positive"));

  const double m_floor = p.nu / p.mu;
  checks.push_back(scalar_check("m_lower_bound", p.m >= m_floor - kSignTol,
                                p.m - m_floor, 0.0, "m >= nu/mu"));

  const double k = box_cap(p);
  checks.push_back(scalar_check("box_cap_at_least_one", k >= 1.0 - kSignTol,
                                k - 1.0, 0.0, "(mu/nu)*m >= 1"));

  // Field reaction sign pattern: f(0)=0, f(1)=0, f>0 on (0,1), f<=0 above 1.
  const double f0 = f.eval(0.0);
  checks.push_back(scalar_check("f_zero_at_origin", std::abs(f0) <= kSignTol,
                                f0, 0.0, "f(0) = 0"));
  const double f1 = f.eval(1.0);
  checks.push_back(scalar_check("f_zero_at_one", std::abs(f1) <= kSignTol, f1,
                                1.0, "f(1) = 0"));
  checks.push_back(positive_on_open("f_positive_on_unit", f, 0.0, 1.0,
                                    "f > 0 on (0,1)"));
  checks.push_back(nonpositive_on("f_nonpositive_above_one", f, 1.0, k,
                                  "f <= 0 on (1, k]"));

  // Road reaction: g(0)=0 and g(m) <= 0.
  const double g0 = g.eval(0.0);
  checks.push_back(scalar_check("g_zero_at_origin", std::abs(g0) <= kSignTol,
                                g0, 0.0, "g(0) = 0"));
  const double gm = g.eval(p.m);
  checks.push_back(scalar_check("g_nonpositive_at_cap", gm <= kSignTol, gm,
                                p.m, "g(m) <= 0"));

  // Lipschitz bounds must exist on the solver ranges.
  bool f_lip_ok = true, g_lip_ok = true;
  double f_lip = 0.0, g_lip = 0.0;
  try {
    f_lip = lipschitz_bound(f, 0.0, std::max(k, f.working_max), 2000);
  } catch (const std::exception&) {
    f_lip_ok = false;
  }
  try {
    g_lip = lipschitz_bound(g, 0.0, std::max(p.m, g.working_max), 2000);
  } catch (const std::exception&) {
    g_lip_ok = false;
  }
  checks.push_back(scalar_check("f_lipschitz_finite",
                                f_lip_ok && std::isfinite(f_lip), f_lip, 0.0,
                                "finite Lipschitz bound for f"));
  checks.push_back(scalar_check("g_lipschitz_finite",
                                g_lip_ok && std::isfinite(g_lip), g_lip, 0.0,
                                "finite Lipschitz bound for g"));

  // The certified working intervals must cover what the solvers feed in.
  checks.push_back(scalar_check("f_interval_covers_cap",
                                f.working_max >= k - kSignTol,
                                f.working_max - k, 0.0,
                                "f working interval covers [0, k]"));
  checks.push_back(scalar_check("g_interval_covers_cap",
                                g.working_max >= p.m - kSignTol,
                                g.working_max - p.m, 0.0,
                                "g working interval covers [0, m]"));
  return rep;
}

}  // namespace fieldroad
