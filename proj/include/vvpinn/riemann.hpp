#pragma once

#include "vvpinn/flux.hpp"

namespace vvpinn {

/// One-sided limit of the self-similar fan at a given wave speed.
/// The two sides only differ on a discontinuity sitting exactly at xi.
enum class Side { FromLeft, FromRight };

/// Rankine-Hugoniot speed (f(uL) - f(uR)) / (uL - uR); a(uL) when uL == uR.
double shock_speed(const ConvexFlux& flux, double uL, double uR);

/// W(xi; uL, uR), the entropy solution of the Riemann problem at x/t = xi.
double fan_value(const ConvexFlux& flux, double xi, double uL, double uR, Side side);

/// Fan value together with its piecewise-exact partial derivatives with
/// respect to the two Riemann states. Inside a rarefaction the value depends
/// on xi only, so both partials vanish there.
struct FanTrace {
  double value = 0.0;
  double d_left = 0.0;
  double d_right = 0.0;
};

FanTrace fan_trace(const ConvexFlux& flux, double xi, double uL, double uR, Side side);

/// f(W(0; uL, uR)) computed by extremizing f over the state interval.
double godunov_flux(const ConvexFlux& flux, double uL, double uR);

/// W(0+; l, v) - v. Zero exactly when v is an attainable trace at a left
/// boundary with datum l.
double left_boundary_residual(const ConvexFlux& flux, double l, double v);

/// W(0-; v, r) - v. Zero exactly when v is an attainable trace at a right
/// boundary with datum r.
double right_boundary_residual(const ConvexFlux& flux, double r, double v);

/// Boundary residual and its derivative with respect to the candidate trace.
struct BoundaryResidual {
  double value = 0.0;
  double d_trace = 0.0;
};

BoundaryResidual left_boundary_residual_slope(const ConvexFlux& flux, double l, double v);
BoundaryResidual right_boundary_residual_slope(const ConvexFlux& flux, double r, double v);

}  // namespace vvpinn
