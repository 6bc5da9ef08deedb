#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "tatonnement/economy.hpp"
#include "tatonnement/geometry.hpp"

namespace tatonnement {

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// One recorded state plus per-step diagnostics. Diagnostics that do not
/// apply to a mechanism (angle_eq without a reference equilibrium, A outside
/// the discrete second-order stepper) are NaN.
struct TrajectoryPoint {
  std::size_t step = 0;
  double time = 0.0;
  Vector prices;
  double xi_norm = 0.0;
  double angle_prev = 0.0;
  double angle_eq = kNotApplicable;
  double scale = kNotApplicable;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::optional<Vector> equilibrium;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  const TrajectoryPoint& front() const { return points.front(); }
  const TrajectoryPoint& back() const { return points.back(); }
  const TrajectoryPoint& operator[](std::size_t i) const { return points[i]; }

  /// Appends a point, filling |ξ|, angle to the previous point and angle to
  /// the reference equilibrium.
  void record(std::size_t step, double time, const Vector& prices, const Economy& economy,
              double scale = kNotApplicable) {
    TrajectoryPoint pt;
    pt.step = step;
    pt.time = time;
    pt.prices = prices;
    pt.xi_norm = economy.excess_demand(PriceVector(prices)).norm();
    pt.angle_prev = points.empty() ? 0.0 : geometry::angle_between(points.back().prices, prices);
    if (equilibrium) pt.angle_eq = geometry::angle_between(*equilibrium, prices);
    pt.scale = scale;
    points.push_back(std::move(pt));
  }

  std::vector<double> times() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& pt : points) out.push_back(pt.time);
    return out;
  }

  std::vector<double> angles_to(const Vector& reference) const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& pt : points) out.push_back(geometry::angle_between(reference, pt.prices));
    return out;
  }
};

/// A run stopped because prices left the positive orthant. Carries everything
/// recorded up to the last valid state.
class RunAborted : public DomainError {
 public:
  RunAborted(const std::string& what, Trajectory partial)
      : DomainError(what, partial.empty() ? std::vector<double>{} : to_std(partial.back().prices)),
        partial_(std::move(partial)) {}

  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

}  // namespace tatonnement
