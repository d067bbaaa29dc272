#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "walkeff/time_grid.hpp"

namespace walkeff {

/// rho(lambda) proportional to (lambda * lambda_max - lambda^2)^nu on [0, lambda_max].
/// nu = 1/2 is the Wigner semicircle, nu = -1/2 with lambda_max = 4 the
/// infinite 1D lattice.
struct PowerSemicircle {
  double nu = 0.5;
  double lambda_max = 4.0;
};

/// rho(lambda) proportional to lambda^-b exp(-1/lambda) on (0, inf), b > 1.
struct Lifshits {
  double b = 2.0;
};

/// Normalized analytic density of states.
class ContinuousDos {
 public:
  using Shape = std::variant<PowerSemicircle, Lifshits>;

  static ContinuousDos power_semicircle(double nu, double lambda_max);
  static ContinuousDos lifshits(double b);

  const Shape& shape() const noexcept { return shape_; }
  /// Constant C with C * raw_density integrating to one.
  double normalization() const noexcept { return normalization_; }
  double density(double lambda) const;
  /// Upper end of the support, empty for unbounded densities.
  std::optional<double> support_max() const;

 private:
  ContinuousDos(Shape shape, double normalization) : shape_(shape), normalization_(normalization) {}

  Shape shape_;
  double normalization_;
};

/// Parses "semicircle:nu=0.5,lmax=2" (lmax defaults to 4) and "lifshits:b=2".
ContinuousDos parse_dos_spec(std::string_view text);
std::string to_string(const ContinuousDos& dos);

/// p_bar(t) = int rho(lambda) exp(-lambda t) d lambda. Throws
/// NumericalFailure naming t when the quadrature does not converge.
std::vector<double> classical_return_continuum(const ContinuousDos& dos, const TimeGrid& grid);
/// |alpha_bar(t)|^2 = |int rho(lambda) exp(-i lambda t) d lambda|^2.
std::vector<double> quantum_return_bound_continuum(const ContinuousDos& dos, const TimeGrid& grid);

/// Natural logarithms of the two series above, evaluated without forming
/// the values, so they stay finite where the values underflow a double.
std::vector<double> log_classical_return_continuum(const ContinuousDos& dos, const TimeGrid& grid);
std::vector<double> log_quantum_return_bound_continuum(const ContinuousDos& dos, const TimeGrid& grid);

/// J_0(2t)^(2d), the return probability of the infinite d-dimensional
/// hypercubic lattice (bound and exact value coincide there).
std::vector<double> lattice_return_1d_product(std::size_t d, const TimeGrid& grid);

enum class Walk { kClassical, kQuantum };

struct PowerLaw {
  double exponent = 0.0;
};

/// t^prefactor_exponent * exp(-stretch_coefficient * t^stretch_exponent)
struct StretchedExp {
  double prefactor_exponent = 0.0;
  double stretch_coefficient = 0.0;
  double stretch_exponent = 0.5;
};

/// Leading large-t behavior (t >> 1), up to a constant factor.
struct AsymptoticLaw {
  std::variant<PowerLaw, StretchedExp> form;

  double log_shape(double t) const;
};

AsymptoticLaw asymptotic_law(const ContinuousDos& dos, Walk which);

}  // namespace walkeff
