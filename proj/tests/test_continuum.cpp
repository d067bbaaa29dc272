#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "quadrature.hpp"
#include "walkeff/continuum_dos.hpp"
#include "walkeff/discrete_transport.hpp"
#include "walkeff/errors.hpp"
#include "walkeff/graph.hpp"
#include "walkeff/scaling.hpp"
#include "walkeff/spectral.hpp"

using namespace walkeff;

namespace {

double slope(const std::vector<double>& v, const TimeGrid& g, std::size_t i, std::size_t j) {
  return (std::log(v[j]) - std::log(v[i])) / (std::log(g[j]) - std::log(g[i]));
}

Series as_series(const TimeGrid& g, const std::vector<double>& v) {
  return Series{{g.times().begin(), g.times().end()}, v};
}

}  // namespace

TEST_CASE("gauss kronrod rule") {
  const detail::ComplexGaussKronrod gk(1e-13, 1e-17, 30);
  // polynomial of degree 22 is integrated exactly by the 15-point Kronrod rule
  const auto poly = gk.integrate([](double x) { return std::complex<double>(std::pow(x, 22), 0.0); }, 0.0, 1.0);
  CHECK(poly.converged);
  CHECK(std::abs(poly.value - 1.0 / 23.0) < 1e-15);
  // a single panel: the embedded 7-point Gauss rule is exact to degree 13,
  // so its difference from the Kronrod value vanishes only when the
  // Gauss nodes are picked out of the Kronrod abscissas correctly
  const detail::ComplexGaussKronrod single(1e-13, 0.0, 0);
  const auto low = single.integrate([](double x) { return std::complex<double>(std::pow(x, 13), 0.0); }, -1.0, 2.0);
  CHECK(std::abs(low.value.real() - (std::pow(2.0, 14) - 1.0) / 14.0) < 1e-10);
  CHECK(low.converged);
  CHECK(low.error < 1e-10);
  const auto high = single.integrate([](double x) { return std::complex<double>(std::pow(x, 14), 0.0); }, -1.0, 1.0);
  CHECK(high.error > 1e-6);

  const auto osc = gk.integrate([](double x) { return std::exp(std::complex<double>(0.0, 50.0 * x)); }, 0.0, 1.0);
  const auto exact = (std::exp(std::complex<double>(0.0, 50.0)) - 1.0) / std::complex<double>(0.0, 50.0);
  CHECK(osc.converged);
  CHECK(std::abs(osc.value - exact) < 1e-12);
}

TEST_CASE("normalization") {
  for (double nu : {-0.5, 0.0, 0.5, 1.5, 3.0}) {
    for (double lmax : {2.0, 4.0, 7.5}) {
      const auto dos = ContinuousDos::power_semicircle(nu, lmax);
      // int_0^lmax (lambda (lmax - lambda))^nu = lmax^(2 nu + 1) B(nu + 1, nu + 1)
      const double beta = std::exp(2.0 * std::lgamma(nu + 1.0) - std::lgamma(2.0 * nu + 2.0));
      CHECK(dos.normalization() == doctest::Approx(1.0 / (std::pow(lmax, 2.0 * nu + 1.0) * beta)).epsilon(1e-10));
    }
  }
  for (double b : {1.5, 2.0, 3.0, 4.5}) {
    // int_0^inf lambda^-b exp(-1/lambda) = Gamma(b - 1)
    CHECK(ContinuousDos::lifshits(b).normalization() == doctest::Approx(1.0 / std::tgamma(b - 1.0)).epsilon(1e-10));
  }
  const auto d = ContinuousDos::power_semicircle(0.5, 4.0);
  CHECK(d.density(-1.0) == 0.0);
  CHECK(d.density(5.0) == 0.0);
  CHECK(d.density(2.0) == doctest::Approx(2.0 / (4.0 * oracle::kPi) * 2.0));
  CHECK(d.support_max() == 4.0);
  CHECK(!ContinuousDos::lifshits(2.0).support_max());
  CHECK_THROWS_AS(ContinuousDos::power_semicircle(-1.0, 4.0), InvalidArgument);
  CHECK_THROWS_AS(ContinuousDos::power_semicircle(0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ContinuousDos::lifshits(1.0), InvalidArgument);
}

TEST_CASE("semicircle family against Bessel closed forms") {
  const auto grid = TimeGrid::logarithmic(1e-2, 300.0, 120, true);
  for (double nu : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
    for (double lmax : {2.0, 4.0}) {
      const auto dos = ContinuousDos::power_semicircle(nu, lmax);
      const auto p = classical_return_continuum(dos, grid);
      const auto q = quantum_return_bound_continuum(dos, grid);
      CHECK(p[0] == 1.0);
      CHECK(q[0] == 1.0);
      for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        const double pc = oracle::semicircle_classical(nu, lmax, t);
        const double qc = oracle::semicircle_quantum(nu, lmax, t);
        CHECK(std::abs(p[i] - pc) <= 1e-9 * pc + 1e-15);
        // compared at amplitude level: near Bessel zeros the oscillatory
        // quadrature keeps an absolute amplitude accuracy of ~1e-11
        CHECK(std::abs(std::sqrt(q[i]) - std::sqrt(qc)) <= 1e-8 * std::sqrt(qc) + 1e-10);
      }
    }
  }
}

TEST_CASE("one dimensional lattice") {
  const auto grid = TimeGrid::linear(0.0, 60.0, 601);
  const auto direct = lattice_return_1d_product(1, grid);
  const auto dos = ContinuousDos::power_semicircle(-0.5, 4.0);
  const auto integral = quantum_return_bound_continuum(dos, grid);
  CHECK(direct[0] == 1.0);
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    const double j0 = oracle::bessel_j0(2.0 * grid[i]);
    CHECK(std::abs(direct[i] - j0 * j0) < 1e-12);
    CHECK(std::abs(integral[i] - j0 * j0) < 1e-10);
  }
  const auto d3 = lattice_return_1d_product(3, TimeGrid({0.0, 1.7}));
  CHECK(d3[0] == 1.0);
  CHECK(d3[1] == doctest::Approx(std::pow(oracle::bessel_j0(3.4), 6)).epsilon(1e-10));

  // first zero of J0(2t), located by bisection on the trapezoid oracle
  const double root = oracle::bisect([](double t) { return oracle::bessel_j0(2.0 * t); }, 1.0, 1.5);
  CHECK(root == doctest::Approx(2.404825557695773 / 2.0).epsilon(1e-12));
  const auto near = lattice_return_1d_product(1, TimeGrid({root - 1e-4, root, root + 1e-4}));
  CHECK(near[1] < 1e-16);
  CHECK(near[0] > near[1]);
  CHECK(near[2] > near[1]);

  // envelope slope over [10, 1000]
  const auto dense = TimeGrid::resolving(10.0, 1000.0, std::numbers::pi / 32.0, 200000);
  const auto env = extract_envelope(as_series(dense, lattice_return_1d_product(1, dense)));
  CHECK(fit_power_law(env.points, {10.0, 1000.0}).exponent == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("ring N=1000 follows J0(2t)^2 before revivals") {
  const auto s = decompose(laplacian(build_ring(1000)), false);
  const auto grid = TimeGrid::linear(0.0, 249.0, 2000);
  const auto q = quantum_return_bound(s, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double j0 = oracle::bessel_j0(2.0 * grid[i], 20000);
    worst = std::max(worst, std::abs(q[i] - j0 * j0));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("semicircle slopes") {
  const auto grid = TimeGrid::logarithmic(10.0, 100.0, 100, false);
  for (double lmax : {1.0, 4.0, 9.0}) {
    const auto p = classical_return_continuum(ContinuousDos::power_semicircle(0.5, lmax), grid);
    CHECK(slope(p, grid, 0, 99) == doctest::Approx(-1.5).epsilon(0.05));
  }
  for (double nu : {-0.5, 0.5, 1.5}) {
    const auto dos = ContinuousDos::power_semicircle(nu, 4.0);
    const auto p = classical_return_continuum(dos, grid);
    const auto law = std::get<PowerLaw>(asymptotic_law(dos, Walk::kClassical).form);
    CHECK(fit_power_law(as_series(grid, p), {10.0, 100.0}).exponent == doctest::Approx(law.exponent).epsilon(0.05));
    const auto dense = TimeGrid::resolving(10.0, 100.0, std::numbers::pi / 32.0, 200000);
    const auto q = quantum_return_bound_continuum(dos, dense);
    const auto env = extract_envelope(as_series(dense, q));
    const auto qlaw = std::get<PowerLaw>(asymptotic_law(dos, Walk::kQuantum).form);
    CHECK(fit_power_law(env.points, {10.0, 100.0}).exponent == doctest::Approx(qlaw.exponent).epsilon(0.05));
  }
}

TEST_CASE("semicircle amplitude envelope is twice the classical decay") {
  // both band edges contribute an amplitude of size p_bar, so the maxima of
  // |alpha_bar| approach 2 p_bar for t >> 1
  const auto dos = ContinuousDos::power_semicircle(0.5, 4.0);
  const auto dense = TimeGrid::resolving(200.0, 260.0, std::numbers::pi / 64.0, 200000);
  const auto q = quantum_return_bound_continuum(dos, dense);
  const auto env = extract_envelope(as_series(dense, q));
  const auto p = classical_return_continuum(dos, TimeGrid(env.points.t));
  for (std::size_t i = 0; i < env.points.size(); ++i)
    CHECK(std::sqrt(env.points.value[i]) / (2.0 * p[i]) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("narrow band acts like a single mode") {
  const auto dos = ContinuousDos::power_semicircle(200.0, 4.0);
  const auto p = classical_return_continuum(dos, TimeGrid({1.0, 3.0}));
  CHECK(p[0] / std::exp(-2.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(p[1] / std::exp(-6.0) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Lifshits family against Bessel K closed forms") {
  const auto grid = TimeGrid::logarithmic(1e-2, 1e5, 40, false);
  for (double b : {1.5, 2.0, 3.0, 4.0}) {
    const auto dos = ContinuousDos::lifshits(b);
    const auto lp = log_classical_return_continuum(dos, grid);
    const auto lq = log_quantum_return_bound_continuum(dos, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      const double ec = oracle::lifshits_log_classical(b, t);
      const double eq = oracle::lifshits_log_quantum(b, t);
      CHECK(std::abs(lp[i] - ec) <= 1e-8 * std::max(1.0, std::abs(ec)));
      CHECK(std::abs(lq[i] - eq) <= 1e-8 * std::max(1.0, std::abs(eq)));
    }
  }
  const auto dos = ContinuousDos::lifshits(2.0);
  const auto small = TimeGrid({0.0, 0.5, 20.0});
  const auto p = classical_return_continuum(dos, small);
  const auto q = quantum_return_bound_continuum(dos, small);
  CHECK(p[0] == 1.0);
  CHECK(q[0] == 1.0);
  CHECK(std::log(p[2]) == doctest::Approx(oracle::lifshits_log_classical(2.0, 20.0)).epsilon(1e-9));
  CHECK(std::log(q[1]) == doctest::Approx(oracle::lifshits_log_quantum(2.0, 0.5)).epsilon(1e-9));
}

TEST_CASE("Lifshits asymptotic shapes") {
  const auto grid = TimeGrid::logarithmic(1e3, 1e5, 30, false);
  for (double b : {2.0, 3.0}) {
    const auto dos = ContinuousDos::lifshits(b);
    for (auto walk : {Walk::kClassical, Walk::kQuantum}) {
      const auto law = asymptotic_law(dos, walk);
      const auto logs = walk == Walk::kClassical ? log_classical_return_continuum(dos, grid)
                                                 : log_quantum_return_bound_continuum(dos, grid);
      // ratio to the law is flat: log difference varies slowly compared with the law itself
      const double first = logs.front() - law.log_shape(grid.front());
      const double last = logs.back() - law.log_shape(grid.back());
      CHECK(std::abs(last - first) < 0.05 * std::abs(law.log_shape(grid.back())));
      CHECK(std::abs(last - first) < 1.0);
    }
  }
  const auto q = quantum_return_bound_continuum(ContinuousDos::lifshits(2.0), TimeGrid::logarithmic(1.0, 1e4, 400, false));
  for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i] < q[i - 1]);
}

TEST_CASE("asymptotic laws") {
  const auto cl = asymptotic_law(ContinuousDos::power_semicircle(-0.5, 4.0), Walk::kClassical);
  CHECK(std::get<PowerLaw>(cl.form).exponent == -0.5);
  const auto qm = asymptotic_law(ContinuousDos::power_semicircle(0.5, 4.0), Walk::kQuantum);
  CHECK(std::get<PowerLaw>(qm.form).exponent == -3.0);
  const auto lq = std::get<StretchedExp>(asymptotic_law(ContinuousDos::lifshits(2.0), Walk::kQuantum).form);
  CHECK(lq.prefactor_exponent == 0.5);
  CHECK(lq.stretch_coefficient == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(lq.stretch_exponent == 0.5);
  const auto lc = std::get<StretchedExp>(asymptotic_law(ContinuousDos::lifshits(2.0), Walk::kClassical).form);
  CHECK(lc.prefactor_exponent == 0.25);
  CHECK(lc.stretch_coefficient == 2.0);
}

TEST_CASE("dos spec strings") {
  const auto s = parse_dos_spec("semicircle:nu=0.5,lmax=2");
  CHECK(std::get<PowerSemicircle>(s.shape()).lambda_max == 2.0);
  const auto d = parse_dos_spec("semicircle:nu=\xE2\x88\x92" "0.5");
  CHECK(std::get<PowerSemicircle>(d.shape()).nu == -0.5);
  CHECK(std::get<PowerSemicircle>(d.shape()).lambda_max == 4.0);
  CHECK(std::get<Lifshits>(parse_dos_spec("lifshits:b=3").shape()).b == 3.0);
  CHECK(to_string(parse_dos_spec(to_string(s))) == to_string(s));
  CHECK_THROWS_AS(parse_dos_spec("semicircle:lmax=2"), ParseError);
  CHECK_THROWS_AS(parse_dos_spec("semicircle:nu=-2"), ParseError);
  CHECK_THROWS_AS(parse_dos_spec("gauss:s=1"), ParseError);
  CHECK_THROWS_AS(parse_dos_spec("lifshits:c=1"), ParseError);
}
