#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace walkeff {

/// Undirected edge, stored with a < b.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on nodes 0..n-1 with unit jump rates.
///
/// The constructor normalizes every edge to (min, max), sorts the list and
/// rejects self-loops, duplicates and out-of-range endpoints.
class Graph {
 public:
  Graph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::vector<std::size_t> degrees() const;
  std::vector<std::vector<std::size_t>> adjacency() const;

  std::size_t component_count() const noexcept { return components_; }
  bool connected() const noexcept { return components_ == 1; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::size_t components_;
};

/// Graph Laplacian L = D - A. Symmetric, integer valued, rows sum to zero.
class Laplacian {
 public:
  explicit Laplacian(Eigen::MatrixXd matrix);

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  double operator()(std::size_t i, std::size_t j) const {
    return matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Eigen::MatrixXd matrix_;
};

Laplacian laplacian(const Graph& g);

struct BuildLimits {
  std::size_t max_nodes = 5000;
};

Graph build_ring(std::size_t n, const BuildLimits& limits = {});
Graph build_star(std::size_t n, const BuildLimits& limits = {});

/// Dendrimer (Cayley tree) with a core of functionality z. Nodes are
/// numbered breadth-first from the core, children in creation order.
Graph build_dendrimer(std::size_t generation, std::size_t z, const BuildLimits& limits = {});

/// Closed-form node count of a dendrimer; throws ResourceError on overflow.
std::size_t dendrimer_node_count(std::size_t generation, std::size_t z);

/// Periodic d-dimensional torus with `side` nodes per axis. Node index is
/// sum_k coord_k * side^k, so d = 1 numbers nodes exactly like build_ring.
Graph build_hypercubic(std::size_t side, std::size_t d, const BuildLimits& limits = {});

/// G(n, p) where pair (i, j), i < j, is present iff
/// counter_uniform(seed, pair_index(i, j, n)) < p.
Graph build_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                        const BuildLimits& limits = {});

/// SplitMix64 evaluated at an arbitrary counter: the counter-th output of
/// the SplitMix64 stream whose state starts at mix64(seed). Returned as a
/// double in [0, 1) built from the top 53 bits.
double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Row-major index of pair (i, j), i < j, among the n(n-1)/2 node pairs.
std::uint64_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept;

// Edge-list text format: "n <count>" then one "i j" per line, ascending.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

enum class GraphFamily { kRing, kStar, kDendrimer, kTorus, kErdosRenyi };

/// Parsed form of "ring:200", "star:10", "dendrimer:10,3", "torus:200,1",
/// "er:1000,0.1,seed=1".
struct GraphSpec {
  GraphFamily family = GraphFamily::kRing;
  std::size_t size = 0;        // ring/star n, dendrimer generation, torus side, er n
  std::size_t secondary = 0;   // dendrimer z, torus d
  double probability = 0.0;    // er only
  bool has_seed = false;
  std::uint64_t seed = 0;
};

GraphSpec parse_graph_spec(std::string_view text);
std::string to_string(const GraphSpec& spec);
Graph build_graph(const GraphSpec& spec, std::uint64_t default_seed = 0,
                  const BuildLimits& limits = {});

}  // namespace walkeff
