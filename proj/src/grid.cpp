#include "fieldroad/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace fieldroad {

FieldGrid build_field_grid(double ell, double L, int nx, int ny,
                           GridMode mode) {
  if (!(ell > 0.0) || !(L > 0.0))
    throw std::invalid_argument("build_field_grid: nonpositive dimensions");
  if (nx < 4 || ny < 4)
    throw std::invalid_argument("build_field_grid: need nx,ny >= 4");
  FieldGrid g;
  g.ell = ell;
  g.L = L;
  g.nx = nx;
  g.ny = ny;
  g.mode = mode;
  g.h1 = 2.0 * ell / nx;
  g.h2 = L / ny;
  return g;
}

FieldFunction FieldFunction::zeros(const FieldGrid& g) {
  FieldFunction v;
  v.grid = g;
  v.values.assign(static_cast<size_t>(g.nx + 1) * (g.ny + 1), 0.0);
  return v;
}

FieldFunction FieldFunction::constant_on_unknowns(const FieldGrid& g, double c) {
  FieldFunction v = zeros(g);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      if (g.is_unknown(i, j)) v.at(i, j) = c;
  return v;
}

std::vector<double> FieldFunction::unknowns() const {
  std::vector<double> x(grid.n_unknowns());
  for (int j = 0; j < grid.unknown_rows(); ++j)
    for (int i = 1; i < grid.nx; ++i)
      x[grid.unknown_index(i, j)] = at(i, j);
  return x;
}

void FieldFunction::set_unknowns(std::span<const double> x) {
  if (static_cast<int>(x.size()) != grid.n_unknowns())
    throw std::invalid_argument("set_unknowns: size mismatch");
  for (int j = 0; j < grid.unknown_rows(); ++j)
    for (int i = 1; i < grid.nx; ++i)
      at(i, j) = x[grid.unknown_index(i, j)];
}

double FieldFunction::sup() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double FieldFunction::min_value() const {
  double s = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.unknown_rows(); ++j)
    for (int i = 1; i < grid.nx; ++i) s = std::min(s, at(i, j));
  return s;
}

double FieldFunction::max_value() const {
  double s = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.unknown_rows(); ++j)
    for (int i = 1; i < grid.nx; ++i) s = std::max(s, at(i, j));
  return s;
}

RoadFunction RoadFunction::zeros(const FieldGrid& g) {
  RoadFunction u;
  u.grid = g;
  u.values.assign(static_cast<size_t>(g.nx + 1), 0.0);
  return u;
}

RoadFunction RoadFunction::constant(const FieldGrid& g, double c) {
  RoadFunction u = zeros(g);
  for (int i = 1; i < g.nx; ++i) u.values[i] = c;
  return u;
}

double RoadFunction::sup() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double RoadFunction::min_value() const {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid.nx; ++i) s = std::min(s, values[i]);
  return s;
}

double RoadFunction::max_value() const {
  double s = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid.nx; ++i) s = std::max(s, values[i]);
  return s;
}

RoadFunction trace_to_road(const FieldFunction& v, RoadSide side) {
  const FieldGrid& g = v.grid;
  if (side == RoadSide::Top && g.mode != GridMode::TwoRoad)
    throw std::invalid_argument("trace_to_road: top trace needs a two-road grid");
  RoadFunction u = RoadFunction::zeros(g);
  const int j = (side == RoadSide::Bottom) ? 0 : g.ny;
  for (int i = 1; i < g.nx; ++i) u.values[i] = v.at(i, j);
  return u;
}

FieldFunction restrict_to(const FieldFunction& v, double ell0) {
  const FieldGrid& g = v.grid;
  if (ell0 > g.ell + 1e-12)
    throw std::invalid_argument("restrict_to: ell0 exceeds source half-width");
  const double nx0_real = 2.0 * ell0 / g.h1;
  const double shift_real = (g.ell - ell0) / g.h1;
  const int nx0 = static_cast<int>(std::lround(nx0_real));
  const int shift = static_cast<int>(std::lround(shift_real));
  if (std::abs(nx0_real - nx0) > 1e-9 || std::abs(shift_real - shift) > 1e-9)
    throw std::invalid_argument("restrict_to: incompatible grids (nodes not aligned)");
  FieldGrid sub = build_field_grid(ell0, g.L, nx0, g.ny, GridMode::OneRoad);
  sub.h1 = g.h1;  // identical spacing by construction; avoid re-rounding
  FieldFunction out = FieldFunction::zeros(sub);
  for (int j = 0; j <= sub.ny; ++j)
    for (int i = 0; i <= sub.nx; ++i) out.at(i, j) = v.at(i + shift, j);
  return out;
}

FieldNorms norms(const FieldFunction& v) {
  const FieldGrid& g = v.grid;
  FieldNorms n;
  n.sup = v.sup();
  double l2 = 0.0;
  for (int j = 0; j <= g.ny; ++j) {
    const double wj = (j == 0 || j == g.ny) ? 0.5 : 1.0;
    for (int i = 0; i <= g.nx; ++i) {
      const double wi = (i == 0 || i == g.nx) ? 0.5 : 1.0;
      const double val = v.at(i, j);
      l2 += wi * wj * val * val;
    }
  }
  n.L2 = std::sqrt(l2 * g.h1 * g.h2);
  double h1s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dx = (v.at(i + 1, j) - v.at(i, j)) / g.h1;
      const double dy = (v.at(i, j + 1) - v.at(i, j)) / g.h2;
      h1s += (dx * dx + dy * dy);
    }
  }
  n.H1_semi = std::sqrt(h1s * g.h1 * g.h2);
  return n;
}

RoadNorms road_norms(const RoadFunction& u) {
  const FieldGrid& g = u.grid;
  RoadNorms n;
  n.sup = u.sup();
  double l2 = 0.0;
  for (int i = 0; i <= g.nx; ++i) {
    const double wi = (i == 0 || i == g.nx) ? 0.5 : 1.0;
    l2 += wi * u.values[i] * u.values[i];
  }
  l2 *= g.h1;
  double semi = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double d = (u.values[i + 1] - u.values[i]) / g.h1;
    semi += d * d;
  }
  semi *= g.h1;
  n.L2 = std::sqrt(l2);
  n.H1 = std::sqrt(l2 + semi);
  return n;
}

namespace {
void write_value(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
}  // namespace

void write_field_csv(const FieldFunction& v, const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.string().c_str(), "w"));
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::fprintf(f.get(), "x1,x2,value\n");
  const FieldGrid& g = v.grid;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      write_value(f.get(), g.x1(i));
      std::fputc(',', f.get());
      write_value(f.get(), g.x2(j));
      std::fputc(',', f.get());
      write_value(f.get(), v.at(i, j));
      std::fputc('\n', f.get());
    }
  }
}

void write_road_csv(const RoadFunction& u, const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.string().c_str(), "w"));
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::fprintf(f.get(), "x1,value\n");
  const FieldGrid& g = u.grid;
  for (int i = 0; i <= g.nx; ++i) {
    write_value(f.get(), g.x1(i));
    std::fputc(',', f.get());
    write_value(f.get(), u.values[i]);
    std::fputc('\n', f.get());
  }
}

RoadFunction read_road_csv(const FieldGrid& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x1,value", 0) != 0)
    throw std::runtime_error(path.string() + ": expected header 'x1,value'");
  RoadFunction u = RoadFunction::zeros(g);
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b))
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    const double x1 = std::stod(a);
    const double val = std::stod(b);
    const double idx_real = (x1 + g.ell) / g.h1;
    const int i = static_cast<int>(std::lround(idx_real));
    if (i < 0 || i > g.nx || std::abs(idx_real - i) > 1e-6)
      throw std::runtime_error(path.string() + ": node off-grid at x1=" + a);
    u.values[i] = val;
    ++count;
  }
  if (count != g.nx + 1)
    throw std::runtime_error(path.string() + ": row count does not match grid");
  u.values[0] = 0.0;
  u.values[g.nx] = 0.0;
  return u;
}

}  // namespace fieldroad
