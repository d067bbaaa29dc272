#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

inline std::vector<double> ring_eigenvalues(std::size_t n) {
  std::vector<double> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(2.0 - 2.0 * std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)));
  return v;
}

// J_0(x) = (1/pi) int_0^pi cos(x sin theta) d theta, trapezoid rule.
inline double bessel_j0(double x, int panels = 4000) {
  const double h = kPi / panels;
  double sum = 0.5 * (1.0 + std::cos(x * std::sin(kPi)));
  for (int k = 1; k < panels; ++k) sum += std::cos(x * std::sin(k * h));
  return sum * h / kPi;
}

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// exp(s * A) for a complex square matrix, Taylor series with scaling and squaring.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXcd x = a * scale;
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Semicircle-family DOS rho ~ (lambda (lmax - lambda))^nu. With a = lmax / 2 and z = a t:
//   alpha_bar = exp(-i z) Gamma(nu + 3/2) (2/z)^(nu + 1/2) J_{nu+1/2}(z)
//   p_bar     = exp(-z)   Gamma(nu + 3/2) (2/z)^(nu + 1/2) I_{nu+1/2}(z)
inline double semicircle_quantum(double nu, double lmax, double t) {
  const double z = 0.5 * lmax * t;
  const double mu = nu + 0.5;
  const double amp = std::tgamma(nu + 1.5) * std::pow(2.0 / z, mu) * std::cyl_bessel_j(mu, z);
  return amp * amp;
}

inline double semicircle_classical(double nu, double lmax, double t) {
  const double z = 0.5 * lmax * t;
  const double mu = nu + 0.5;
  // exp(-z) I_mu(z) through the integral I_mu(z) e^-z for large z would overflow otherwise
  if (z > 500.0) {
    // large-argument series of exp(-z) I_mu(z)
    const double m4 = 4.0 * mu * mu;
    const double series = 1.0 - (m4 - 1.0) / (8.0 * z) + (m4 - 1.0) * (m4 - 9.0) / (2.0 * 64.0 * z * z) -
                          (m4 - 1.0) * (m4 - 9.0) * (m4 - 25.0) / (6.0 * 512.0 * z * z * z);
    return std::tgamma(nu + 1.5) * std::pow(2.0 / z, mu) * series / std::sqrt(2.0 * kPi * z);
  }
  return std::tgamma(nu + 1.5) * std::pow(2.0 / z, mu) * std::exp(-z) * std::cyl_bessel_i(mu, z);
}

// log K_nu(z) for Re z > 0 from K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du,
// with the factor exp(-z) taken out. Trapezoid rule on an even analytic integrand.
inline cplx log_bessel_k(double nu, cplx z) {
  const double h = std::min(1e-3, 0.02 / std::sqrt(std::abs(z)));
  cplx sum = 0.5;  // u = 0 term: exp(0) * cosh(0) / 2
  for (int k = 1;; ++k) {
    const double u = k * h;
    const double c = std::cosh(u) - 1.0;
    if (z.real() * c > 60.0) break;
    sum += std::exp(-z * c) * std::cosh(nu * u);
  }
  return -z + std::log(sum * h);
}

// Lifshits DOS rho = lambda^-b exp(-1/lambda) / Gamma(b - 1):
//   p_bar     = 2 t^((b-1)/2)    K_{b-1}(2 sqrt(t))    / Gamma(b - 1)
//   alpha_bar = 2 (it)^((b-1)/2) K_{b-1}(2 sqrt(i t)) / Gamma(b - 1)
inline double lifshits_log_classical(double b, double t) {
  return std::log(2.0) + 0.5 * (b - 1.0) * std::log(t) + log_bessel_k(b - 1.0, 2.0 * std::sqrt(t)).real() -
         std::lgamma(b - 1.0);
}

inline double lifshits_log_quantum(double b, double t) {
  const cplx z = 2.0 * std::sqrt(cplx(0.0, t));
  const double log_abs = std::log(2.0) + 0.5 * (b - 1.0) * std::log(t) + log_bessel_k(b - 1.0, z).real() -
                         std::lgamma(b - 1.0);
  return 2.0 * log_abs;
}

}  // namespace oracle
