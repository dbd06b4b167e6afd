#pragma once

#include <functional>
#include <string>

namespace vvpinn {

/// Strictly convex scalar flux f with its characteristic speed a = f' and
/// curvature f''. The sonic point is the unique minimizer of f (a(w) = 0).
class ConvexFlux {
 public:
  using Map = std::function<double(double)>;

  /// `inverse_speed` maps a wave speed xi to the state v with a(v) = xi.
  /// When omitted, it is found by bisection (a is strictly increasing).
  ConvexFlux(std::string name, Map eval, Map speed, Map curvature,
             double sonic_point, Map inverse_speed = {});

  double eval(double u) const { return eval_(u); }
  double speed(double u) const { return speed_(u); }
  double curvature(double u) const { return curvature_(u); }
  double sonic_point() const { return sonic_point_; }

  /// State v in [lo, hi] with a(v) = xi; requires a(lo) <= xi <= a(hi).
  double inverse_speed(double xi, double lo, double hi) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Map eval_;
  Map speed_;
  Map curvature_;
  double sonic_point_;
  Map inverse_speed_;
};

/// f(u) = u^2 / 2.
ConvexFlux burgers();

/// Working range on which convexity is assumed and checked.
inline constexpr double kWorkingRangeMin = -3.0;
inline constexpr double kWorkingRangeMax = 3.0;

}  // namespace vvpinn
