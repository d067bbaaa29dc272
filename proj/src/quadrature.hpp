#pragma once

// Adaptive Gauss-Kronrod (7/15) integration of complex-valued integrands.

#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace walkeff::detail {

struct QuadratureResult {
  std::complex<double> value;
  double error = 0.0;
  double l1 = 0.0;
  bool converged = true;
};

class ComplexGaussKronrod {
 public:
  /// Accepts a panel when |K15 - G7| <= max(rel_tol * L1(panel), abs_tol),
  /// otherwise bisects, up to max_depth levels.
  ComplexGaussKronrod(double rel_tol, double abs_tol, unsigned max_depth)
      : rel_tol_(rel_tol), abs_tol_(abs_tol), max_depth_(max_depth) {}

  template <class F>
  QuadratureResult integrate(F&& f, double a, double b) const {
    QuadratureResult out{};
    recurse(f, a, b, 0, out);
    return out;
  }

 private:
  template <class F>
  void recurse(F& f, double a, double b, unsigned depth, QuadratureResult& out) const {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using Gauss = boost::math::quadrature::gauss<double, 7>;
    static const auto& xk = Kronrod::abscissa();
    static const auto& wk = Kronrod::weights();
    static const auto& wg = Gauss::weights();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const std::complex<double> f0 = f(center);
    std::complex<double> kronrod = wk[0] * f0;
    std::complex<double> gauss = wg[0] * f0;
    double l1 = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < xk.size(); ++i) {
      const double dx = half * xk[i];
      const std::complex<double> lo = f(center - dx);
      const std::complex<double> hi = f(center + dx);
      kronrod += wk[i] * (lo + hi);
      l1 += wk[i] * (std::abs(lo) + std::abs(hi));
      // Gauss nodes are the even-indexed Kronrod abscissas
      if (i % 2 == 0) gauss += wg[i / 2] * (lo + hi);
    }
    kronrod *= half;
    gauss *= half;
    l1 *= std::abs(half);
    const double err = std::abs(kronrod - gauss);
    const bool finite = std::isfinite(kronrod.real()) && std::isfinite(kronrod.imag());
    if (finite && err <= std::max(rel_tol_ * l1, abs_tol_)) {
      out.value += kronrod;
      out.error += err;
      out.l1 += l1;
      return;
    }
    if (depth >= max_depth_ || !finite) {
      out.value += kronrod;
      out.error += err;
      out.l1 += l1;
      out.converged = false;
      return;
    }
    recurse(f, a, center, depth + 1, out);
    recurse(f, center, b, depth + 1, out);
  }

  double rel_tol_;
  double abs_tol_;
  unsigned max_depth_;
};

}  // namespace walkeff::detail
