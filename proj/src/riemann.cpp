#include "vvpinn/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvpinn {
namespace {

void require_finite(double a, double b, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error(std::string(what) + ": non-finite state");
  }
}

}  // namespace

double shock_speed(const ConvexFlux& flux, double uL, double uR) {
  if (uL == uR) return flux.speed(uL);
  return (flux.eval(uL) - flux.eval(uR)) / (uL - uR);
}

FanTrace fan_trace(const ConvexFlux& flux, double xi, double uL, double uR, Side side) {
  require_finite(uL, uR, "fan_value");
  if (!std::isfinite(xi)) throw std::domain_error("fan_value: non-finite wave speed");

  if (uL > uR) {
    const double s = shock_speed(flux, uL, uR);
    const bool take_left = s > xi || (s == xi && side == Side::FromLeft);
    return take_left ? FanTrace{uL, 1.0, 0.0} : FanTrace{uR, 0.0, 1.0};
  }
  // Rarefaction, or constant data treated as a degenerate one.
  if (xi <= flux.speed(uL)) return {uL, 1.0, 0.0};
  if (xi >= flux.speed(uR)) return {uR, 0.0, 1.0};
  return {flux.inverse_speed(xi, uL, uR), 0.0, 0.0};
}

double fan_value(const ConvexFlux& flux, double xi, double uL, double uR, Side side) {
  return fan_trace(flux, xi, uL, uR, side).value;
}

double godunov_flux(const ConvexFlux& flux, double uL, double uR) {
  require_finite(uL, uR, "godunov_flux");
  if (uL >= uR) return std::max(flux.eval(uL), flux.eval(uR));
  const double w = flux.sonic_point();
  if (uL < w && w < uR) return flux.eval(w);
  return std::min(flux.eval(uL), flux.eval(uR));
}

BoundaryResidual left_boundary_residual_slope(const ConvexFlux& flux, double l, double v) {
  const FanTrace w = fan_trace(flux, 0.0, l, v, Side::FromRight);
  return {w.value - v, w.d_right - 1.0};
}

BoundaryResidual right_boundary_residual_slope(const ConvexFlux& flux, double r, double v) {
  const FanTrace w = fan_trace(flux, 0.0, v, r, Side::FromLeft);
  return {w.value - v, w.d_left - 1.0};
}

double left_boundary_residual(const ConvexFlux& flux, double l, double v) {
  return left_boundary_residual_slope(flux, l, v).value;
}

double right_boundary_residual(const ConvexFlux& flux, double r, double v) {
  return right_boundary_residual_slope(flux, r, v).value;
}

}  // namespace vvpinn
