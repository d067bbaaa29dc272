#include "walkeff/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "walkeff/csv.hpp"
#include "walkeff/errors.hpp"

namespace walkeff {
namespace {

constexpr std::size_t kMinFitPoints = 5;

struct LogPoints {
  std::vector<double> log_t;
  std::vector<double> t;
  std::vector<double> log_y;
};

LogPoints collect(const Series& series, FitWindow window) {
  validate(series);
  if (!(window.lo < window.hi)) throw InvalidArgument("fit window needs lo < hi");
  LogPoints pts;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.t[i];
    if (t < window.lo || t > window.hi) continue;
    const double y = series.value[i];
    if (!(y > 0.0) || !(t > 0.0)) {
      throw InvalidArgument("non-positive value " + format_double(y) + " at t = " + format_double(t) +
                            " inside the fit window");
    }
    pts.t.push_back(t);
    pts.log_t.push_back(std::log(t));
    pts.log_y.push_back(std::log(y));
  }
  if (pts.t.size() < kMinFitPoints) {
    throw InvalidArgument("fit window [" + format_double(window.lo) + ", " + format_double(window.hi) +
                          "] holds " + std::to_string(pts.t.size()) + " points, need at least " +
                          std::to_string(kMinFitPoints));
  }
  return pts;
}

struct LinearFit {
  Eigen::VectorXd coef;
  double rms = 0.0;
  Eigen::VectorXd stderr_;
};

LinearFit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  LinearFit fit;
  const auto qr = x.colPivHouseholderQr();
  fit.coef = qr.solve(y);
  const Eigen::VectorXd r = y - x * fit.coef;
  const auto n = static_cast<double>(x.rows());
  const auto p = static_cast<double>(x.cols());
  fit.rms = std::sqrt(r.squaredNorm() / n);
  const double sigma2 = n > p ? r.squaredNorm() / (n - p) : 0.0;
  const Eigen::MatrixXd cov = sigma2 * (x.transpose() * x).inverse();
  fit.stderr_ = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return fit;
}

double interpolate_log_log(const Series& log_env, double log_t, std::size_t& cursor) {
  // log_env.t holds log times, ascending
  while (cursor + 1 < log_env.size() && log_env.t[cursor + 1] < log_t) ++cursor;
  const double x0 = log_env.t[cursor];
  const double x1 = log_env.t[std::min(cursor + 1, log_env.size() - 1)];
  const double y0 = log_env.value[cursor];
  const double y1 = log_env.value[std::min(cursor + 1, log_env.size() - 1)];
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (log_t - x0) / (x1 - x0);
}

}  // namespace

Series Series::window(double lo, double hi) const {
  Series out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= lo && t[i] <= hi) {
      out.t.push_back(t[i]);
      out.value.push_back(value[i]);
    }
  }
  return out;
}

void validate(const Series& s) {
  if (s.t.size() != s.value.size()) throw InvalidArgument("series time and value lengths differ");
  for (std::size_t i = 1; i < s.t.size(); ++i) {
    if (!(s.t[i] > s.t[i - 1])) throw InvalidArgument("series times must be strictly increasing");
  }
}

Envelope extract_envelope(const Series& series, std::size_t half_width) {
  validate(series);
  if (half_width < 1) throw InvalidArgument("envelope half width must be >= 1");
  const std::size_t n = series.size();
  if (n < 2 * half_width + 1) {
    throw InvalidArgument("series of " + std::to_string(n) + " points is too short for half width " +
                          std::to_string(half_width));
  }
  const auto& v = series.value;
  Envelope env;
  env.half_width = half_width;
  for (std::size_t i = half_width; i + half_width < n; ++i) {
    bool keep = true;
    for (std::size_t k = 1; k <= half_width && keep; ++k) keep = v[i] > v[i - k] && v[i] >= v[i + k];
    if (keep) {
      env.points.t.push_back(series.t[i]);
      env.points.value.push_back(v[i]);
    }
  }
  if (env.points.t.empty()) {
    const auto it = std::max_element(v.begin(), v.end());  // first occurrence
    const auto idx = static_cast<std::size_t>(it - v.begin());
    env.points.t.push_back(series.t[idx]);
    env.points.value.push_back(*it);
  }
  return env;
}

Envelope extract_envelope(const Envelope& envelope) { return envelope; }

bool is_non_oscillatory(const Series& series, std::size_t half_width) {
  if (series.size() < 2 * half_width + 1) return true;
  const auto env = extract_envelope(series, half_width);
  if (env.points.size() >= 2) return false;
  // a single interior maximum still counts as non-oscillatory
  return true;
}

ScalingFit fit_power_law(const Series& series, FitWindow window) {
  const auto pts = collect(series, window);
  const auto n = static_cast<Eigen::Index>(pts.t.size());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = pts.log_t[static_cast<std::size_t>(i)];
    x(i, 1) = 1.0;
    y(i) = pts.log_y[static_cast<std::size_t>(i)];
  }
  const auto lf = least_squares(x, y);
  ScalingFit fit;
  fit.model = FitModel::kPowerLaw;
  fit.exponent = lf.coef(0);
  fit.intercept = lf.coef(1);
  fit.window = window;
  fit.points = pts.t.size();
  fit.residual = lf.rms;
  fit.exponent_stderr = lf.stderr_(0);
  return fit;
}

ScalingFit fit_stretched_exp(const Series& series, FitWindow window) {
  const auto pts = collect(series, window);
  const auto n = static_cast<Eigen::Index>(pts.t.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    x(i, 0) = pts.log_t[k];
    x(i, 1) = -std::sqrt(pts.t[k]);
    x(i, 2) = 1.0;
    y(i) = pts.log_y[k];
  }
  const auto lf = least_squares(x, y);
  ScalingFit fit;
  fit.model = FitModel::kStretchedExp;
  fit.exponent = lf.coef(0);
  fit.stretch_coefficient = lf.coef(1);
  fit.intercept = lf.coef(2);
  fit.window = window;
  fit.points = pts.t.size();
  fit.residual = lf.rms;
  fit.exponent_stderr = lf.stderr_(0);
  fit.model_mismatch = !(fit.stretch_coefficient > 0.0);
  return fit;
}

DeltaPSeries delta_p_from_logs(const Series& log_classical, const Series& log_quantum_envelope) {
  validate(log_classical);
  validate(log_quantum_envelope);
  DeltaPSeries out;
  // envelope as (log t, log value), dropping t = 0 and non-finite logs
  Series env;
  for (std::size_t i = 0; i < log_quantum_envelope.size(); ++i) {
    const double t = log_quantum_envelope.t[i];
    const double v = log_quantum_envelope.value[i];
    if (t > 0.0 && std::isfinite(v)) {
      env.t.push_back(std::log(t));
      env.value.push_back(v);
    }
  }
  if (env.t.empty()) return out;
  const double t_lo = std::exp(env.t.front());
  const double t_hi = std::exp(env.t.back());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < log_classical.size(); ++i) {
    const double t = log_classical.t[i];
    if (t <= 0.0 || t < t_lo || t > t_hi) continue;
    const double lc = log_classical.value[i];
    const double lq = interpolate_log_log(env, std::log(t), cursor);
    if (!(lc < 0.0) || !(lq < 0.0) || !std::isfinite(lc) || !std::isfinite(lq)) {
      out.excluded_times.push_back(t);
      continue;
    }
    out.values.t.push_back(t);
    out.values.value.push_back(lq / lc);
  }
  if (!out.values.t.empty()) {
    const double start = out.values.t.back() / 10.0;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (out.values.t[i] >= start) {
        sum += out.values.value[i];
        ++count;
      }
    }
    out.asymptotic = sum / static_cast<double>(count);
  }
  return out;
}

DeltaPSeries delta_p_series(const Series& classical, const Series& quantum_envelope) {
  auto to_log = [](const Series& s) {
    Series out{s.t, s.value};
    for (double& v : out.value) v = v > 0.0 ? std::log(v) : std::numeric_limits<double>::quiet_NaN();
    return out;
  };
  return delta_p_from_logs(to_log(classical), to_log(quantum_envelope));
}

std::optional<double> detect_crossover(const Series& delta) {
  validate(delta);
  for (std::size_t i = 0; i + 1 < delta.size(); ++i) {
    const double a = delta.value[i];
    const double b = delta.value[i + 1];
    if (a < 1.0 && b >= 1.0) {
      const double f = (1.0 - a) / (b - a);
      return delta.t[i] + f * (delta.t[i + 1] - delta.t[i]);
    }
  }
  return std::nullopt;
}

Saturation saturation(const Series& series, double tail_fraction) {
  validate(series);
  if (!(tail_fraction > 0.0 && tail_fraction <= 0.5))
    throw InvalidArgument("tail fraction must lie in (0, 0.5]");
  if (series.size() == 0) throw InvalidArgument("empty series");
  const auto n = series.size();
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n))));
  return window_saturation(series, series.t[n - count], series.t[n - 1]);
}

Saturation window_saturation(const Series& series, double lo, double hi) {
  const auto w = series.window(lo, hi);
  if (w.size() == 0) throw InvalidArgument("no points in saturation window");
  Saturation s;
  for (double v : w.value) s.mean += v;
  s.mean /= static_cast<double>(w.size());
  for (double v : w.value) s.amplitude = std::max(s.amplitude, std::abs(v - s.mean));
  return s;
}

EfficiencyReport make_report(const Series& classical, const Series& quantum, const Series& quantum_envelope,
                             FitModel model, FitWindow classical_window, FitWindow quantum_window,
                             double tail_fraction) {
  EfficiencyReport r;
  const auto fit = model == FitModel::kPowerLaw ? fit_power_law : fit_stretched_exp;
  r.classical_fit = fit(classical, classical_window);
  r.quantum_fit = fit(quantum_envelope, quantum_window);
  // Stretched exponentials are ranked by the coefficient of sqrt(t).
  const auto rate = [model](const ScalingFit& f) {
    return model == FitModel::kStretchedExp ? f.stretch_coefficient : -f.exponent;
  };
  r.p_classical = rate(r.classical_fit);
  r.p_quantum = rate(r.quantum_fit);
  r.exponent_ratio = r.p_quantum / r.p_classical;
  r.delta_p = delta_p_series(classical, quantum_envelope);
  r.classical_saturation = saturation(classical, tail_fraction);
  r.quantum_saturation = saturation(quantum, tail_fraction);
  r.crossover = detect_crossover(r.delta_p.values);
  return r;
}

void write_report(std::ostream& out, const EfficiencyReport& report,
                  std::span<const std::pair<std::string, std::string>> extra) {
  for (const auto& [key, value] : extra) out << key << " = " << value << '\n';
  auto fit_lines = [&out](const char* prefix, const ScalingFit& f) {
    out << prefix << "_model = " << (f.model == FitModel::kPowerLaw ? "power_law" : "stretched_exp") << '\n';
    out << prefix << "_window = " << format_double(f.window.lo) << ',' << format_double(f.window.hi) << '\n';
    out << prefix << "_exponent = " << format_double(f.exponent) << '\n';
    out << prefix << "_exponent_stderr = " << format_double(f.exponent_stderr) << '\n';
    if (f.model == FitModel::kStretchedExp) {
      out << prefix << "_stretch_coefficient = " << format_double(f.stretch_coefficient) << '\n';
      out << prefix << "_model_mismatch = " << (f.model_mismatch ? "true" : "false") << '\n';
    }
    out << prefix << "_intercept = " << format_double(f.intercept) << '\n';
    out << prefix << "_points = " << f.points << '\n';
    out << prefix << "_residual = " << format_double(f.residual) << '\n';
  };
  fit_lines("classical_fit", report.classical_fit);
  fit_lines("quantum_bound_envelope_fit", report.quantum_fit);
  out << "P_cl = " << format_double(report.p_classical) << '\n';
  out << "P_qm = " << format_double(report.p_quantum) << '\n';
  out << "exponent_ratio = " << format_double(report.exponent_ratio) << '\n';
  out << "delta_p_asymptotic = "
      << (report.delta_p.asymptotic ? format_double(*report.delta_p.asymptotic) : std::string("none")) << '\n';
  out << "delta_p_excluded_points = " << report.delta_p.excluded_times.size() << '\n';
  out << "crossover_time = " << (report.crossover ? format_double(*report.crossover) : std::string("none")) << '\n';
  out << "classical_tail_mean = " << format_double(report.classical_saturation.mean) << '\n';
  out << "classical_tail_amplitude = " << format_double(report.classical_saturation.amplitude) << '\n';
  out << "quantum_bound_tail_mean = " << format_double(report.quantum_saturation.mean) << '\n';
  out << "quantum_bound_tail_amplitude = " << format_double(report.quantum_saturation.amplitude) << '\n';
}

void write_delta_p_csv(std::ostream& out, const DeltaPSeries& delta) {
  out << "t,delta_p\n";
  for (std::size_t i = 0; i < delta.values.size(); ++i)
    out << format_double(delta.values.t[i]) << ',' << format_double(delta.values.value[i]) << '\n';
}

}  // namespace walkeff
