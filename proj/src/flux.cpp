#include "vvpinn/flux.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace vvpinn {

ConvexFlux::ConvexFlux(std::string name, Map eval, Map speed, Map curvature,
                       double sonic_point, Map inverse_speed)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      speed_(std::move(speed)),
      curvature_(std::move(curvature)),
      sonic_point_(sonic_point),
      inverse_speed_(std::move(inverse_speed)) {
  if (!eval_ || !speed_ || !curvature_) {
    throw std::invalid_argument("ConvexFlux: eval, speed and curvature are required");
  }
  if (!std::isfinite(sonic_point_)) {
    throw std::invalid_argument("ConvexFlux: sonic point must be finite");
  }
}

double ConvexFlux::inverse_speed(double xi, double lo, double hi) const {
  if (inverse_speed_) return inverse_speed_(xi);
  // a is strictly increasing; plain bisection to machine resolution.
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (speed_(mid) < xi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConvexFlux burgers() {
  return ConvexFlux(
      "burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
      [](double) { return 1.0; }, 0.0, [](double xi) { return xi; });
}

}  // namespace vvpinn
