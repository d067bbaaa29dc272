#include "walkeff/continuum_dos.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "quadrature.hpp"
#include "spec_tokens.hpp"
#include "walkeff/csv.hpp"
#include "walkeff/errors.hpp"
#include "walkeff/parallel.hpp"

namespace walkeff {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-8;

[[noreturn]] void quadrature_failure(const std::string& what, double t) {
  throw NumericalFailure(what + " quadrature did not converge at t = " + format_double(t));
}

double tanh_sinh_integral(const auto& f, double a, double b, double t, const char* what) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = integrator.integrate(f, a, b, 1e-12, &error, &l1);
  } catch (const std::exception&) {
    quadrature_failure(what, t);
  }
  if (!std::isfinite(value) || error > kQuadTol * std::max(l1, 1e-300)) quadrature_failure(what, t);
  return value;
}

// ---------------------------------------------------------------------------
// Power-semicircle family. With lambda = lambda_max * sin^2(theta / 2) on the
// lower half of the band and lambda = lambda_max * cos^2(theta / 2) on the upper
// half, rho d lambda is proportional to sin^m(theta) d theta, m = 2 nu + 1,
// theta in [0, pi/2]. The only singular point is theta = 0.

double sin_power(double theta, double m) {
  if (theta <= 0.0) return 0.0;
  const double v = std::pow(std::sin(theta), m);
  return std::isfinite(v) ? v : 0.0;
}

double semicircle_weight_integral(double m) {
  const auto f = [m](double theta) { return 2.0 * sin_power(theta, m); };
  return tanh_sinh_integral(f, 0.0, kPi / 2, 0.0, "normalization");
}

double semicircle_classical(const PowerSemicircle& dos, double weight, double t) {
  if (t == 0.0) return 1.0;
  const double m = 2.0 * dos.nu + 1.0;
  const double lm = dos.lambda_max;
  const auto f = [&](double theta) {
    const double s = std::sin(0.5 * theta);
    const double lo = lm * s * s;
    return sin_power(theta, m) * (std::exp(-lo * t) + std::exp(-(lm - lo) * t));
  };
  // Split where exp(-lambda t) has decayed by e^-40 so the peak at theta = 0
  // gets its own interval.
  const double frac = std::min(0.5, 40.0 / (lm * t));
  const double cut = 2.0 * std::asin(std::sqrt(frac));
  double sum = tanh_sinh_integral(f, 0.0, cut, t, "classical");
  if (cut < kPi / 2) {
    const detail::ComplexGaussKronrod gk(1e-12, 0.0, 40);
    const auto r = gk.integrate([&](double x) { return cplx(f(x), 0.0); }, cut, kPi / 2);
    if (!r.converged) quadrature_failure("classical", t);
    sum += r.value.real();
  }
  return std::min(1.0, sum / weight);
}

// A(t) = int_0^{pi/2} sin^m(theta) exp(-i lambda_max t sin^2(theta/2)) d theta.
// The upper half of the band contributes exp(-i lambda_max t) * conj(A(t)).
cplx semicircle_half_amplitude(const PowerSemicircle& dos, double t) {
  const double m = 2.0 * dos.nu + 1.0;
  const double lm = dos.lambda_max;
  const auto f = [&](double theta) {
    const double s = std::sin(0.5 * theta);
    const double phase = lm * t * s * s;
    return sin_power(theta, m) * cplx(std::cos(phase), -std::sin(phase));
  };
  // Panel boundaries at the zeros of cos/sin: lambda t = k pi.
  const auto boundary = [&](double k) { return 2.0 * std::asin(std::sqrt(k * kPi / (lm * t))); };
  const double half_periods = 0.5 * lm * t / kPi;
  const double first = half_periods > 1.0 ? boundary(1.0) : kPi / 2;

  cplx sum{tanh_sinh_integral([&](double x) { return f(x).real(); }, 0.0, first, t, "quantum"),
           tanh_sinh_integral([&](double x) { return f(x).imag(); }, 0.0, first, t, "quantum")};
  if (half_periods <= 1.0) return sum;

  const detail::ComplexGaussKronrod gk(1e-12, 1e-300, 30);
  const auto panels = static_cast<std::size_t>(std::floor(half_periods));
  double left = first;
  for (std::size_t k = 2; k <= panels + 1; ++k) {
    const double right = k <= panels ? boundary(static_cast<double>(k)) : kPi / 2;
    if (right > left) {
      const auto r = gk.integrate(f, left, right);
      if (!r.converged) quadrature_failure("quantum", t);
      sum += r.value;
    }
    left = right;
  }
  return sum;
}

double semicircle_quantum(const PowerSemicircle& dos, double weight, double t) {
  if (t == 0.0) return 1.0;
  const cplx a = semicircle_half_amplitude(dos, t);
  const double phase = dos.lambda_max * t;
  const cplx alpha = (a + cplx(std::cos(phase), -std::sin(phase)) * std::conj(a)) / weight;
  return std::min(1.0, std::norm(alpha));
}

// ---------------------------------------------------------------------------
// Lifshits family, rho = lambda^-b exp(-1/lambda). Integrals are taken in
// u = ln|lambda|. The quantum integral runs along the ray
// lambda = s exp(-i pi/4), which passes through the saddle point of
// -1/lambda - i lambda t; the integrand is analytic in the open right half
// plane and decays on both connecting arcs, so the value is unchanged and
// the integrand never oscillates against a much smaller result.

struct LogIntegral {
  double log_magnitude;
  bool converged;
};

// log |int exp(g(u)) du| for an exponent g whose real part is concave
// with maximum at u_peak.
template <class Exponent>
LogIntegral log_integral_around_peak(const Exponent& g, double u_peak) {
  constexpr double kDrop = 60.0;
  const double peak = g(u_peak).real();
  auto edge = [&](double direction) {
    double step = 0.5;
    double u = u_peak;
    while (peak - g(u).real() < kDrop && step < 1e6) {
      u += direction * step;
      step *= 1.5;
    }
    return u;
  };
  const double lo = edge(-1.0);
  const double hi = edge(1.0);
  const detail::ComplexGaussKronrod gk(1e-13, 0.0, 30);
  const auto integrand = [&](double u) { return std::exp(g(u) - peak); };
  // unit-length pieces keep the adaptive bisection shallow
  const auto pieces = static_cast<std::size_t>(std::ceil(hi - lo));
  cplx sum{};
  bool converged = true;
  for (std::size_t k = 0; k < pieces; ++k) {
    const double a = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(pieces);
    const double b = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(pieces);
    const auto r = gk.integrate(integrand, a, b);
    converged = converged && r.converged;
    sum += r.value;
  }
  return {peak + std::log(std::abs(sum)), converged};
}

double lifshits_log_classical_unnormalized(double b, double t) {
  const auto g = [b, t](double u) { return cplx((1.0 - b) * u - std::exp(-u) - t * std::exp(u), 0.0); };
  // maximizer x = e^u of (1-b) u - 1/x - t x
  const double x = 2.0 / (std::sqrt((b - 1.0) * (b - 1.0) + 4.0 * t) + (b - 1.0));
  const auto r = log_integral_around_peak(g, std::log(x));
  if (!r.converged) quadrature_failure("classical", t);
  return r.log_magnitude;
}

double lifshits_log_quantum_unnormalized(double b, double t) {
  const cplx rot = std::polar(1.0, kPi / 4);  // 1/omega = i*omega for omega = e^{-i pi/4}
  const cplx prefactor_phase(0.0, -(1.0 - b) * kPi / 4);
  const auto g = [=](double u) {
    return (1.0 - b) * u + prefactor_phase - rot * (std::exp(-u) + t * std::exp(u));
  };
  const double c = std::sqrt(2.0) * (b - 1.0);
  const double x = 2.0 / (std::sqrt(c * c + 4.0 * t) + c);
  const auto r = log_integral_around_peak(g, std::log(x));
  if (!r.converged) quadrature_failure("quantum", t);
  return r.log_magnitude;
}

double lifshits_log_normalization_integral(double b) {
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard lock(mutex);
  if (const auto it = cache.find(b); it != cache.end()) return it->second;
  const double value = lifshits_log_classical_unnormalized(b, 0.0);
  cache.emplace(b, value);
  return value;
}

template <class Fn>
std::vector<double> evaluate(const TimeGrid& grid, Fn fn) {
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = fn(grid[i]); });
  return out;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double semicircle_weight(const PowerSemicircle& p, double normalization) {
  // normalization = 1 / ((lambda_max / 2)^m * weight)
  return 1.0 / (normalization * std::pow(0.5 * p.lambda_max, 2.0 * p.nu + 1.0));
}

}  // namespace

ContinuousDos ContinuousDos::power_semicircle(double nu, double lambda_max) {
  if (!(nu > -1.0) || !std::isfinite(nu)) throw InvalidArgument("semicircle exponent nu must be > -1");
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max))
    throw InvalidArgument("semicircle lambda_max must be > 0");
  const double m = 2.0 * nu + 1.0;
  const double weight = semicircle_weight_integral(m);
  return ContinuousDos(PowerSemicircle{nu, lambda_max}, 1.0 / (std::pow(0.5 * lambda_max, m) * weight));
}

ContinuousDos ContinuousDos::lifshits(double b) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidArgument("Lifshits exponent b must be > 1");
  return ContinuousDos(Lifshits{b}, std::exp(-lifshits_log_normalization_integral(b)));
}

double ContinuousDos::density(double lambda) const {
  return std::visit(Overloaded{
                        [&](const PowerSemicircle& p) {
                          if (lambda <= 0.0 || lambda >= p.lambda_max) return 0.0;
                          return normalization_ * std::pow(lambda * (p.lambda_max - lambda), p.nu);
                        },
                        [&](const Lifshits& l) {
                          if (lambda <= 0.0) return 0.0;
                          return normalization_ * std::exp(-l.b * std::log(lambda) - 1.0 / lambda);
                        },
                    },
                    shape_);
}

std::optional<double> ContinuousDos::support_max() const {
  if (const auto* p = std::get_if<PowerSemicircle>(&shape_)) return p->lambda_max;
  return std::nullopt;
}

ContinuousDos parse_dos_spec(std::string_view text) {
  const auto tokens = detail::tokenize_spec(text);
  auto value_of = [&](std::string_view key) -> const detail::SpecItem* {
    for (const auto& item : tokens.items) {
      if (item.key == key) return &item;
    }
    return nullptr;
  };
  auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& item : tokens.items) {
      if (item.key.empty()) throw ParseError("expected key=value parameter", item.position);
      bool ok = false;
      for (auto k : allowed) ok = ok || item.key == k;
      if (!ok) throw ParseError("unknown key '" + std::string(item.key) + "'", item.position - item.key.size() - 1);
    }
  };
  auto number = [&](const detail::SpecItem& item) {
    // accept the typographic minus sign U+2212 as well as '-'
    constexpr std::string_view kMinus = "\xE2\x88\x92";
    if (item.value.starts_with(kMinus)) {
      detail::SpecItem copy = item;
      std::string buffer = "-" + std::string(item.value.substr(kMinus.size()));
      copy.value = buffer;
      return detail::parse_double(copy);
    }
    return detail::parse_double(item);
  };
  auto build = [&](auto&& make, const detail::SpecItem& at) {
    try {
      return make();
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), at.position);
    }
  };

  if (tokens.family == "semicircle") {
    check_keys({"nu", "lmax"});
    const auto* nu = value_of("nu");
    if (nu == nullptr) throw ParseError("semicircle needs nu=<value>", tokens.end);
    const auto* lmax = value_of("lmax");
    const double nu_v = number(*nu);
    const double lmax_v = lmax != nullptr ? number(*lmax) : 4.0;
    return build([&] { return ContinuousDos::power_semicircle(nu_v, lmax_v); }, *nu);
  }
  if (tokens.family == "lifshits") {
    check_keys({"b"});
    const auto* b = value_of("b");
    if (b == nullptr) throw ParseError("lifshits needs b=<value>", tokens.end);
    const double b_v = number(*b);
    return build([&] { return ContinuousDos::lifshits(b_v); }, *b);
  }
  throw ParseError("unknown DOS family '" + std::string(tokens.family) + "'", 0);
}

std::string to_string(const ContinuousDos& dos) {
  return std::visit(Overloaded{
                        [](const PowerSemicircle& p) {
                          return "semicircle:nu=" + format_double(p.nu) + ",lmax=" + format_double(p.lambda_max);
                        },
                        [](const Lifshits& l) { return "lifshits:b=" + format_double(l.b); },
                    },
                    dos.shape());
}

std::vector<double> classical_return_continuum(const ContinuousDos& dos, const TimeGrid& grid) {
  if (const auto* p = std::get_if<PowerSemicircle>(&dos.shape())) {
    const double weight = semicircle_weight(*p, dos.normalization());
    return evaluate(grid, [&](double t) { return semicircle_classical(*p, weight, t); });
  }
  auto logs = log_classical_return_continuum(dos, grid);
  for (double& v : logs) v = std::exp(v);
  return logs;
}

std::vector<double> quantum_return_bound_continuum(const ContinuousDos& dos, const TimeGrid& grid) {
  if (const auto* p = std::get_if<PowerSemicircle>(&dos.shape())) {
    const double weight = semicircle_weight(*p, dos.normalization());
    return evaluate(grid, [&](double t) { return semicircle_quantum(*p, weight, t); });
  }
  auto logs = log_quantum_return_bound_continuum(dos, grid);
  for (double& v : logs) v = std::exp(v);
  return logs;
}

std::vector<double> log_classical_return_continuum(const ContinuousDos& dos, const TimeGrid& grid) {
  if (const auto* l = std::get_if<Lifshits>(&dos.shape())) {
    const double log_z = -std::log(dos.normalization());
    return evaluate(grid, [&](double t) {
      if (t == 0.0) return 0.0;
      return std::min(0.0, lifshits_log_classical_unnormalized(l->b, t) - log_z);
    });
  }
  auto values = classical_return_continuum(dos, grid);
  for (double& v : values) v = std::log(v);
  return values;
}

std::vector<double> log_quantum_return_bound_continuum(const ContinuousDos& dos, const TimeGrid& grid) {
  if (const auto* l = std::get_if<Lifshits>(&dos.shape())) {
    const double log_z = -std::log(dos.normalization());
    return evaluate(grid, [&](double t) {
      if (t == 0.0) return 0.0;
      return std::min(0.0, 2.0 * (lifshits_log_quantum_unnormalized(l->b, t) - log_z));
    });
  }
  auto values = quantum_return_bound_continuum(dos, grid);
  for (double& v : values) v = std::log(v);
  return values;
}

std::vector<double> lattice_return_1d_product(std::size_t d, const TimeGrid& grid) {
  if (d < 1) throw InvalidArgument("lattice dimension must be >= 1");
  return evaluate(grid, [d](double t) {
    const double j0 = boost::math::cyl_bessel_j(0, 2.0 * t);
    return std::pow(j0 * j0, static_cast<double>(d));
  });
}

double AsymptoticLaw::log_shape(double t) const {
  return std::visit(Overloaded{
                        [t](const PowerLaw& p) { return p.exponent * std::log(t); },
                        [t](const StretchedExp& s) {
                          return s.prefactor_exponent * std::log(t) -
                                 s.stretch_coefficient * std::pow(t, s.stretch_exponent);
                        },
                    },
                    form);
}

AsymptoticLaw asymptotic_law(const ContinuousDos& dos, Walk which) {
  const bool quantum = which == Walk::kQuantum;
  return std::visit(Overloaded{
                        [&](const PowerSemicircle& p) {
                          const double classical = -(1.0 + p.nu);
                          return AsymptoticLaw{PowerLaw{quantum ? 2.0 * classical : classical}};
                        },
                        [&](const Lifshits& l) {
                          const double a = 2.0 * l.b - 3.0;
                          return quantum ? AsymptoticLaw{StretchedExp{a / 2.0, 2.0 * std::sqrt(2.0), 0.5}}
                                         : AsymptoticLaw{StretchedExp{a / 4.0, 2.0, 0.5}};
                        },
                    },
                    dos.shape());
}

}  // namespace walkeff
