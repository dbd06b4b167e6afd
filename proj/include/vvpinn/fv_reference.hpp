#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "vvpinn/flux.hpp"

namespace vvpinn {

/// Uniform mesh of n_cells cells on (a, b).
struct Grid1D {
  double a = -1.0;
  double b = 1.0;
  std::size_t n_cells = 0;

  Grid1D() = default;
  Grid1D(double left, double right, std::size_t cells);

  double dx() const { return (b - a) / static_cast<double>(n_cells); }
  double center(std::size_t i) const { return a + (static_cast<double>(i) + 0.5) * dx(); }
  double edge(std::size_t i) const { return a + static_cast<double>(i) * dx(); }
  std::vector<double> centers() const;
};

/// Cell averages at a given time.
struct CellField {
  std::vector<double> values;
  double time = 0.0;
};

/// Boundary data l(t) at x = a and r(t) at x = b.
struct BoundaryData {
  std::function<double(double)> left;
  std::function<double(double)> right;
};

/// Initial profile u0, optionally with a registered antiderivative so that
/// cell averages can be taken exactly.
struct InitialData {
  std::function<double(double)> value;
  std::function<double(double)> antiderivative;
};

CellField project_initial(const Grid1D& grid, const InitialData& u0);

/// Stable time step cfl * dx / max wave speed, with the speed floored at 1e-12.
double stable_dt(const ConvexFlux& flux, const Grid1D& grid, const CellField& field,
                 const BoundaryData& bd, double cfl);

struct StepOutcome {
  CellField field;
  double dt = 0.0;
  double left_flux = 0.0;   ///< g_{-1/2}
  double right_flux = 0.0;  ///< g_{n-1/2}
};

/// One forward-Euler Godunov update. The boundary data, sampled at the
/// start-of-step time, act as exterior states in the boundary fluxes.
/// `dt_cap` shortens the step (used to land on a target time).
StepOutcome step_detailed(const ConvexFlux& flux, const Grid1D& grid, const CellField& field,
                          const BoundaryData& bd, double cfl,
                          double dt_cap = std::numeric_limits<double>::infinity());

CellField step(const ConvexFlux& flux, const Grid1D& grid, const CellField& field,
               const BoundaryData& bd, double cfl);

inline constexpr double kDefaultCfl = 0.9;
inline constexpr std::size_t kDefaultReferenceCells = 2000;

CellField solve_to(const ConvexFlux& flux, const Grid1D& grid, const InitialData& u0,
                   const BoundaryData& bd, double t_end, double cfl = kDefaultCfl);

/// Advances an existing field to t_end.
CellField advance_to(const ConvexFlux& flux, const Grid1D& grid, CellField field,
                     const BoundaryData& bd, double t_end, double cfl = kDefaultCfl);

/// `x,u` header, one row per cell center, 17 significant digits.
void write_profile_csv(std::ostream& os, const Grid1D& grid, const CellField& field);

}  // namespace vvpinn
