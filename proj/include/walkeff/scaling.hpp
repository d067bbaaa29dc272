#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace walkeff {

/// Sampled function of time; t strictly increasing, same length as value.
struct Series {
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const noexcept { return t.size(); }
  /// Sub-series with lo <= t <= hi.
  Series window(double lo, double hi) const;
};

/// Checks the Series invariants, throws InvalidArgument.
void validate(const Series& s);

/// Local maxima of an oscillating series.
struct Envelope {
  Series points;
  std::size_t half_width = 3;
};

/// Keeps index i when value[i] is strictly greater than the half_width
/// points on its left and not smaller than those on its right (plateaus keep
/// their first point). Only interior indices with a full neighborhood are
/// candidates; with no interior maximum the global maximum is returned.
Envelope extract_envelope(const Series& series, std::size_t half_width = 3);
/// An Envelope already consists of maxima and is returned unchanged.
Envelope extract_envelope(const Envelope& envelope);

/// True when the series has fewer than two interior maxima, i.e. it does
/// not oscillate and serves as its own envelope.
bool is_non_oscillatory(const Series& series, std::size_t half_width = 3);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

enum class FitModel { kPowerLaw, kStretchedExp };

/// Least-squares fit in log space.
///   power law:       log y = exponent * log t + intercept
///   stretched exp:   log y = exponent * log t - stretch_coefficient * sqrt(t) + intercept
struct ScalingFit {
  FitModel model = FitModel::kPowerLaw;
  double exponent = 0.0;
  double stretch_coefficient = 0.0;
  double intercept = 0.0;
  FitWindow window;
  std::size_t points = 0;
  double residual = 0.0;          // RMS of log-space residuals
  double exponent_stderr = 0.0;   // linear-regression standard error
  bool model_mismatch = false;    // stretched exp with c <= 0 at the optimum
};

ScalingFit fit_power_law(const Series& series, FitWindow window);
ScalingFit fit_stretched_exp(const Series& series, FitWindow window);

/// Delta P(t) = ln env[|alpha|^2](t) / ln p_bar(t) on the classical grid.
struct DeltaPSeries {
  Series values;
  std::vector<double> excluded_times;  // log of a value was >= 0, or no envelope there
  std::optional<double> asymptotic;    // mean over the last decade of retained points
};

/// Inputs are probabilities; the envelope is interpolated log-linearly in
/// log t onto the classical grid. Grid points outside the envelope's time
/// range are dropped silently, points where either value is >= 1 (log >= 0)
/// or not positive are recorded in excluded_times.
DeltaPSeries delta_p_series(const Series& classical, const Series& quantum_envelope);
/// Same as delta_p_series but takes natural logarithms of the two series.
DeltaPSeries delta_p_from_logs(const Series& log_classical, const Series& log_quantum_envelope);

/// First time Delta P crosses 1 from below, linearly interpolated.
std::optional<double> detect_crossover(const Series& delta);

struct Saturation {
  double mean = 0.0;
  double amplitude = 0.0;  // max |value - mean|
};

/// Statistics over the last tail_fraction (0 < f <= 0.5) of the points.
Saturation saturation(const Series& series, double tail_fraction);
/// Statistics over lo <= t <= hi.
Saturation window_saturation(const Series& series, double lo, double hi);

/// Summary of one experiment. Quantum quantities refer to the
/// eigenvalue-only lower bound |alpha_bar|^2.
struct EfficiencyReport {
  ScalingFit classical_fit;
  ScalingFit quantum_fit;
  double p_classical = 0.0;    // -exponent, or the sqrt(t) coefficient for stretched fits
  double p_quantum = 0.0;
  double exponent_ratio = 0.0; // p_quantum / p_classical
  DeltaPSeries delta_p;
  Saturation classical_saturation;
  Saturation quantum_saturation;
  std::optional<double> crossover;
};

/// `quantum_envelope` is fitted over quantum_window and used for Delta P;
/// saturation values come from the tails of the raw series.
EfficiencyReport make_report(const Series& classical, const Series& quantum, const Series& quantum_envelope,
                             FitModel model, FitWindow classical_window, FitWindow quantum_window,
                             double tail_fraction);

/// Flat "key = value" lines; `extra` entries are written first.
void write_report(std::ostream& out, const EfficiencyReport& report,
                  std::span<const std::pair<std::string, std::string>> extra = {});
/// "t,delta_p"
void write_delta_p_csv(std::ostream& out, const DeltaPSeries& delta);

}  // namespace walkeff
