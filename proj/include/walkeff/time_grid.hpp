#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace walkeff {

enum class Spacing { kLinear, kLogarithmic, kCustom };

/// Strictly increasing, finite, non-negative sample times (rate-1 units).
class TimeGrid {
 public:
  TimeGrid(std::vector<double> times, Spacing spacing = Spacing::kCustom);

  /// `points` log-spaced samples over [t_min, t_max]; t = 0 is prepended
  /// when include_zero is set.
  static TimeGrid logarithmic(double t_min, double t_max, std::size_t points, bool include_zero);
  static TimeGrid linear(double t_min, double t_max, std::size_t points);
  /// Default experiment grid: 600 log points over [1e-2, 1e4] plus t = 0.
  static TimeGrid standard();

  /// Linear grid over [t_min, t_max] whose step is at most `max_step`,
  /// capped at `max_points` samples.
  static TimeGrid resolving(double t_min, double t_max, double max_step, std::size_t max_points);

  std::span<const double> times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  Spacing spacing() const noexcept { return spacing_; }

 private:
  std::vector<double> times_;
  Spacing spacing_;
};

}  // namespace walkeff
