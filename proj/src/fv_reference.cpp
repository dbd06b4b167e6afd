#include "vvpinn/fv_reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "vvpinn/riemann.hpp"

namespace vvpinn {
namespace {

void require_finite_field(const CellField& field) {
  for (double v : field.values) {
    if (!std::isfinite(v)) throw std::domain_error("fv step: non-finite cell value");
  }
}

}  // namespace

Grid1D::Grid1D(double left, double right, std::size_t cells) : a(left), b(right), n_cells(cells) {
  if (!(left < right)) throw std::invalid_argument("Grid1D: requires a < b");
  if (cells == 0) throw std::invalid_argument("Grid1D: requires n_cells > 0");
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> xs(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) xs[i] = center(i);
  return xs;
}

CellField project_initial(const Grid1D& grid, const InitialData& u0) {
  CellField field;
  field.values.resize(grid.n_cells);
  const double dx = grid.dx();
  if (u0.antiderivative) {
    double lower = u0.antiderivative(grid.edge(0));
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double upper = u0.antiderivative(grid.edge(i + 1));
      field.values[i] = (upper - lower) / dx;
      lower = upper;
    }
    return field;
  }
  // 3-point Gauss-Legendre on each cell.
  const double r = std::sqrt(3.0 / 5.0);
  constexpr std::array<double, 3> weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const std::array<double, 3> nodes{-r, 0.0, r};
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double xc = grid.center(i);
    double sum = 0.0;
    for (std::size_t q = 0; q < 3; ++q) sum += weights[q] * u0.value(xc + 0.5 * dx * nodes[q]);
    field.values[i] = sum;
  }
  return field;
}

double stable_dt(const ConvexFlux& flux, const Grid1D& grid, const CellField& field,
                 const BoundaryData& bd, double cfl) {
  double max_speed = std::max(std::abs(flux.speed(bd.left(field.time))),
                              std::abs(flux.speed(bd.right(field.time))));
  for (double u : field.values) max_speed = std::max(max_speed, std::abs(flux.speed(u)));
  return cfl * grid.dx() / std::max(max_speed, 1e-12);
}

StepOutcome step_detailed(const ConvexFlux& flux, const Grid1D& grid, const CellField& field,
                          const BoundaryData& bd, double cfl, double dt_cap) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("fv step: cfl must lie in (0, 1]");
  if (field.values.size() != grid.n_cells) {
    throw std::invalid_argument("fv step: field size does not match grid");
  }
  require_finite_field(field);

  const std::size_t n = grid.n_cells;
  const double l = bd.left(field.time);
  const double r = bd.right(field.time);
  if (!std::isfinite(l) || !std::isfinite(r)) {
    throw std::domain_error("fv step: non-finite boundary datum");
  }

  StepOutcome out;
  out.dt = std::min(stable_dt(flux, grid, field, bd, cfl), dt_cap);
  const double ratio = out.dt / grid.dx();

  // Interface fluxes g_{i-1/2}, i = 0..n.
  std::vector<double> g(n + 1);
  g[0] = godunov_flux(flux, l, field.values[0]);
  for (std::size_t i = 1; i < n; ++i) g[i] = godunov_flux(flux, field.values[i - 1], field.values[i]);
  g[n] = godunov_flux(flux, field.values[n - 1], r);

  out.field.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.field.values[i] = field.values[i] - ratio * (g[i + 1] - g[i]);
  out.field.time = field.time + out.dt;
  out.left_flux = g[0];
  out.right_flux = g[n];
  return out;
}

CellField step(const ConvexFlux& flux, const Grid1D& grid, const CellField& field,
               const BoundaryData& bd, double cfl) {
  return step_detailed(flux, grid, field, bd, cfl).field;
}

CellField advance_to(const ConvexFlux& flux, const Grid1D& grid, CellField field,
                     const BoundaryData& bd, double t_end, double cfl) {
  if (!(t_end > field.time)) {
    if (t_end == field.time) return field;
    throw std::invalid_argument("advance_to: t_end precedes the field time");
  }
  while (field.time < t_end) {
    const double remaining = t_end - field.time;
    StepOutcome next = step_detailed(flux, grid, field, bd, cfl, remaining);
    const bool last = next.dt >= remaining;
    field = std::move(next.field);
    if (last) field.time = t_end;
  }
  return field;
}

CellField solve_to(const ConvexFlux& flux, const Grid1D& grid, const InitialData& u0,
                   const BoundaryData& bd, double t_end, double cfl) {
  if (!(t_end > 0.0)) throw std::invalid_argument("solve_to: t_end must be positive");
  return advance_to(flux, grid, project_initial(grid, u0), bd, t_end, cfl);
}

void write_profile_csv(std::ostream& os, const Grid1D& grid, const CellField& field) {
  os << "x,u\n";
  char line[96];
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", grid.center(i), field.values[i]);
    os << line;
  }
}

}  // namespace vvpinn
