#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "walkeff/errors.hpp"
#include "walkeff/graph.hpp"
#include "walkeff/spectral.hpp"

using namespace walkeff;

namespace {

std::vector<double> eigenvalues_of(const Graph& g) {
  const auto s = decompose(laplacian(g), false);
  return {s.eigenvalues().begin(), s.eigenvalues().end()};
}

void check_simple(const Graph& g) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : g.edges()) {
    CHECK(e.a < e.b);
    CHECK(e.b < g.node_count());
    CHECK(seen.insert({e.a, e.b}).second);
  }
}

}  // namespace

TEST_CASE("ring") {
  const auto tri = build_ring(3);
  CHECK(tri.node_count() == 3);
  CHECK(tri.edge_count() == 3);

  const auto ring = build_ring(200);
  CHECK(ring.edge_count() == 200);
  for (auto d : ring.degrees()) CHECK(d == 2);
  CHECK(ring.connected());
  check_simple(ring);

  const auto ev = eigenvalues_of(build_ring(4));
  const std::vector<double> expected{0, 2, 2, 4};
  for (std::size_t i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  CHECK_THROWS_AS(build_ring(2), InvalidArgument);
}

TEST_CASE("ring spectrum matches the cosine formula") {
  auto expected = oracle::ring_eigenvalues(37);
  std::sort(expected.begin(), expected.end());
  const auto ev = eigenvalues_of(build_ring(37));
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - expected[i]) < 1e-12);
}

TEST_CASE("star") {
  const auto path = build_star(3);
  CHECK(path.edge_count() == 2);
  CHECK(path.degrees() == std::vector<std::size_t>{2, 1, 1});

  const auto star = build_star(10);
  const auto deg = star.degrees();
  CHECK(deg[0] == 9);
  CHECK(std::all_of(deg.begin() + 1, deg.end(), [](auto d) { return d == 1; }));

  const auto ev10 = eigenvalues_of(star);
  CHECK(std::abs(ev10.front()) < 1e-12);
  for (std::size_t i = 1; i < 9; ++i) CHECK(ev10[i] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev10.back() == doctest::Approx(10.0).epsilon(1e-12));

  const auto ev5 = eigenvalues_of(build_star(5));
  const std::vector<double> expected{0, 1, 1, 1, 5};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(ev5[i] - expected[i]) < 1e-12);
}

TEST_CASE("dendrimer") {
  const auto core = build_dendrimer(0, 3);
  CHECK(core.node_count() == 1);
  CHECK(core.edge_count() == 0);

  const auto g2 = build_dendrimer(2, 3);
  CHECK(g2.node_count() == 10);
  const auto deg = g2.degrees();
  CHECK(std::count(deg.begin(), deg.end(), 1u) == 6);
  CHECK(g2.connected());
  CHECK(g2.edge_count() == 9);

  // breadth-first numbering: core 0, first shell 1..3, leaves 4..9
  CHECK(deg[0] == 3);
  for (std::size_t i = 1; i <= 3; ++i) CHECK(deg[i] == 3);
  const auto adj = g2.adjacency();
  CHECK(adj[1] == std::vector<std::size_t>{0, 4, 5});

  CHECK(build_dendrimer(10, 3).node_count() == 3070);
  for (std::size_t gen = 0; gen <= 8; ++gen) {
    CHECK(dendrimer_node_count(gen, 3) == 3 * (std::size_t{1} << gen) - 2);
    for (std::size_t z = 4; z <= 6; ++z) {
      std::size_t pw = 1;
      for (std::size_t k = 0; k < gen; ++k) pw *= z - 1;
      CHECK(dendrimer_node_count(gen, z) == 1 + z * (pw - 1) / (z - 2));
    }
  }
  CHECK_THROWS_AS(dendrimer_node_count(200, 3), ResourceError);
  CHECK_THROWS_AS(build_dendrimer(12, 3), ResourceError);
  CHECK_THROWS_AS(build_dendrimer(3, 2), InvalidArgument);
}

TEST_CASE("hypercubic") {
  CHECK(build_hypercubic(200, 1) == build_ring(200));
  CHECK(build_hypercubic(3, 1) == build_ring(3));

  const auto torus = build_hypercubic(4, 2);
  for (auto d : torus.degrees()) CHECK(d == 4);
  check_simple(torus);

  std::vector<double> expected;
  const std::vector<double> line{0, 2, 4, 2};
  for (double a : line)
    for (double b : line) expected.push_back(a + b);
  std::sort(expected.begin(), expected.end());
  const auto ev = eigenvalues_of(torus);
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - expected[i]) < 1e-12);

  const auto cube = build_hypercubic(3, 3);
  for (auto d : cube.degrees()) CHECK(d == 6);
  CHECK_THROWS_AS(build_hypercubic(100, 2, BuildLimits{5000}), ResourceError);
}

TEST_CASE("erdos renyi") {
  const auto pair = build_erdos_renyi(2, 1.0, 12345);
  CHECK(pair.edge_count() == 1);

  const auto complete = build_erdos_renyi(100, 1.0, 7);
  CHECK(complete.edge_count() == 4950);
  const auto ev = eigenvalues_of(complete);
  CHECK(std::abs(ev[0]) < 1e-10);
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(100.0).epsilon(1e-10));

  CHECK(build_erdos_renyi(300, 0.05, 9) == build_erdos_renyi(300, 0.05, 9));
  CHECK(!(build_erdos_renyi(300, 0.05, 9) == build_erdos_renyi(300, 0.05, 10)));

  const auto sparse = build_erdos_renyi(200, 0.002, 3);
  CHECK(!sparse.connected());
  CHECK(sparse.component_count() > 1);
}

TEST_CASE("counter based generator") {
  CHECK(pair_index(0, 1, 5) == 0);
  CHECK(pair_index(0, 4, 5) == 3);
  CHECK(pair_index(1, 2, 5) == 4);
  CHECK(pair_index(3, 4, 5) == 9);
  double mean = 0.0;
  for (std::uint64_t c = 0; c < 100000; ++c) {
    const double u = counter_uniform(42, c);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(counter_uniform(1, 0) != counter_uniform(2, 0));
}

TEST_CASE("erdos renyi spectrum follows the semicircle law") {
  const std::size_t n = 1000;
  const double p = 0.1;
  const auto ev = eigenvalues_of(build_erdos_renyi(n, p, 1));
  // Drop the zero mode, then center and scale to unit variance; the
  // semicircle of radius 2 has unit variance.
  std::vector<double> x(ev.begin() + 1, ev.end());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / x.size());
  for (double& v : x) v = (v - mean) / sd;
  std::sort(x.begin(), x.end());
  auto cdf = [](double v) {
    if (v <= -2.0) return 0.0;
    if (v >= 2.0) return 1.0;
    return 0.5 + v * std::sqrt(4.0 - v * v) / (4.0 * oracle::kPi) + std::asin(v / 2.0) / oracle::kPi;
  };
  double ks = 0.0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    ks = std::max({ks, std::abs(f - i / m), std::abs(f - (i + 1) / m)});
  }
  CHECK(ks < 0.05);
}

TEST_CASE("laplacian") {
  const auto tri = laplacian(build_ring(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(tri(i, j) == (i == j ? 2.0 : -1.0));

  CHECK(laplacian(build_star(10))(0, 0) == 9.0);

  for (const auto& g : {build_ring(50), build_star(20), build_dendrimer(4, 3), build_hypercubic(5, 2),
                        build_erdos_renyi(80, 0.1, 5)}) {
    const auto l = laplacian(g);
    CHECK(l.matrix() == l.matrix().transpose());
    for (Eigen::Index r = 0; r < l.matrix().rows(); ++r) {
      CHECK(l.matrix().row(r).sum() == 0.0);
      CHECK(l.matrix()(r, r) >= 0.0);
    }
  }

  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(Laplacian{asym}, InvalidArgument);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InvalidArgument);
  const Graph g(3, {{2, 0}});
  CHECK(g.edges()[0].a == 0);
  CHECK(g.edges()[0].b == 2);
  CHECK(g.component_count() == 2);
}

TEST_CASE("edge list round trip") {
  const auto g = build_dendrimer(3, 4);
  std::stringstream buf;
  write_edge_list(buf, g);
  CHECK(read_edge_list(buf) == g);
  std::stringstream bad("n 3\n0 x\n");
  CHECK_THROWS_AS(read_edge_list(bad), ParseError);
}

TEST_CASE("graph spec strings") {
  const auto ring = parse_graph_spec("ring:200");
  CHECK(ring.family == GraphFamily::kRing);
  CHECK(ring.size == 200);
  const auto den = parse_graph_spec("dendrimer:10,3");
  CHECK(den.family == GraphFamily::kDendrimer);
  CHECK(den.secondary == 3);
  const auto er = parse_graph_spec("er:1000,0.1,seed=1");
  CHECK(er.family == GraphFamily::kErdosRenyi);
  CHECK(er.probability == 0.1);
  CHECK(er.has_seed);
  CHECK(er.seed == 1);
  CHECK(parse_graph_spec(to_string(er)).probability == 0.1);
  CHECK(build_graph(parse_graph_spec("torus:200,1")) == build_ring(200));

  CHECK_THROWS_AS(parse_graph_spec(""), ParseError);
  CHECK_THROWS_AS(parse_graph_spec("ring"), ParseError);
  CHECK_THROWS_AS(parse_graph_spec("moebius:5"), ParseError);
  try {
    parse_graph_spec("ring:2x0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}
