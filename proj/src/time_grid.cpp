#include "walkeff/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "walkeff/errors.hpp"

namespace walkeff {

TimeGrid::TimeGrid(std::vector<double> times, Spacing spacing)
    : times_(std::move(times)), spacing_(spacing) {
  if (times_.empty()) throw InvalidArgument("time grid must not be empty");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw InvalidArgument("time grid contains a non-finite value");
    if (i == 0 && times_[i] < 0.0) throw InvalidArgument("time grid must start at t >= 0");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw InvalidArgument("time grid must be strictly increasing");
  }
}

TimeGrid TimeGrid::logarithmic(double t_min, double t_max, std::size_t points, bool include_zero) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2)
    throw InvalidArgument("logarithmic grid needs 0 < t_min < t_max and at least 2 points");
  std::vector<double> t;
  t.reserve(points + 1);
  if (include_zero) t.push_back(0.0);
  const double lo = std::log10(t_min);
  const double hi = std::log10(t_max);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    t.push_back(std::pow(10.0, lo + f * (hi - lo)));
  }
  t[include_zero ? 1 : 0] = t_min;
  t.back() = t_max;
  return TimeGrid(std::move(t), Spacing::kLogarithmic);
}

TimeGrid TimeGrid::linear(double t_min, double t_max, std::size_t points) {
  if (!(t_min >= 0.0) || !(t_max > t_min) || points < 2)
    throw InvalidArgument("linear grid needs 0 <= t_min < t_max and at least 2 points");
  std::vector<double> t(points);
  const double step = (t_max - t_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) t[i] = t_min + step * static_cast<double>(i);
  t.back() = t_max;
  return TimeGrid(std::move(t), Spacing::kLinear);
}

TimeGrid TimeGrid::standard() { return logarithmic(1e-2, 1e4, 600, true); }

TimeGrid TimeGrid::resolving(double t_min, double t_max, double max_step, std::size_t max_points) {
  if (!(max_step > 0.0)) throw InvalidArgument("resolving grid needs a positive step");
  const double span = t_max - t_min;
  auto points = static_cast<std::size_t>(std::ceil(span / max_step)) + 1;
  points = std::clamp<std::size_t>(points, 2, std::max<std::size_t>(max_points, 2));
  return linear(t_min, t_max, points);
}

}  // namespace walkeff
