#include "walkeff/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "spec_tokens.hpp"
#include "walkeff/errors.hpp"

namespace walkeff {
namespace {

std::size_t count_components(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = n;
  for (const auto& e : edges) {
    const auto ra = find(e.a);
    const auto rb = find(e.b);
    if (ra != rb) {
      parent[std::max(ra, rb)] = std::min(ra, rb);
      --components;
    }
  }
  return components;
}

void check_cap(std::size_t n, const BuildLimits& limits, const char* family) {
  if (n > limits.max_nodes) {
    throw ResourceError(std::string(family) + " with " + std::to_string(n) +
                        " nodes exceeds the node cap of " + std::to_string(limits.max_nodes));
  }
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Graph::Graph(std::size_t node_count, std::vector<Edge> edges) : n_(node_count), edges_(std::move(edges)) {
  if (n_ == 0) throw InvalidArgument("graph must have at least one node");
  for (auto& e : edges_) {
    if (e.a == e.b) throw InvalidArgument("self-loop at node " + std::to_string(e.a));
    if (e.a >= n_ || e.b >= n_) {
      throw InvalidArgument("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                            ") out of range for n = " + std::to_string(n_));
    }
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end());
  const auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InvalidArgument("duplicate edge (" + std::to_string(dup->a) + ", " +
                          std::to_string(dup->b) + ")");
  }
  components_ = count_components(n_, edges_);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

std::vector<std::vector<std::size_t>> Graph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

Laplacian::Laplacian(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw InvalidArgument("Laplacian must be a non-empty square matrix");
  if (matrix_ != matrix_.transpose()) throw InvalidArgument("Laplacian must be symmetric");
}

Laplacian laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto a = static_cast<Eigen::Index>(e.a);
    const auto b = static_cast<Eigen::Index>(e.b);
    m(a, b) = -1.0;
    m(b, a) = -1.0;
    m(a, a) += 1.0;
    m(b, b) += 1.0;
  }
  return Laplacian(std::move(m));
}

Graph build_ring(std::size_t n, const BuildLimits& limits) {
  if (n < 3) throw InvalidArgument("ring needs n >= 3, got " + std::to_string(n));
  check_cap(n, limits, "ring");
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

Graph build_star(std::size_t n, const BuildLimits& limits) {
  if (n < 3) throw InvalidArgument("star needs n >= 3, got " + std::to_string(n));
  check_cap(n, limits, "star");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i});
  return Graph(n, std::move(edges));
}

std::size_t dendrimer_node_count(std::size_t generation, std::size_t z) {
  if (z < 3) throw InvalidArgument("dendrimer functionality z must be >= 3, got " + std::to_string(z));
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  std::size_t shell = 1;
  for (std::size_t g = 0; g < generation; ++g) {
    const std::size_t branching = g == 0 ? z : z - 1;
    if (shell > kMax / branching) throw ResourceError("dendrimer node count overflows");
    shell *= branching;
    if (total > kMax - shell) throw ResourceError("dendrimer node count overflows");
    total += shell;
  }
  return total;
}

Graph build_dendrimer(std::size_t generation, std::size_t z, const BuildLimits& limits) {
  const std::size_t n = dendrimer_node_count(generation, z);
  check_cap(n, limits, "dendrimer");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::size_t next = 1;
  std::size_t shell_begin = 0;
  std::size_t shell_end = 1;
  for (std::size_t g = 0; g < generation; ++g) {
    for (std::size_t parent = shell_begin; parent < shell_end; ++parent) {
      const std::size_t children = g == 0 ? z : z - 1;
      for (std::size_t c = 0; c < children; ++c) edges.push_back({parent, next++});
    }
    shell_begin = shell_end;
    shell_end = next;
  }
  return Graph(n, std::move(edges));
}

Graph build_hypercubic(std::size_t side, std::size_t d, const BuildLimits& limits) {
  if (side < 3) throw InvalidArgument("torus side must be >= 3, got " + std::to_string(side));
  if (d < 1) throw InvalidArgument("torus dimension must be >= 1");
  std::size_t n = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (n > limits.max_nodes / side) {
      throw ResourceError("torus " + std::to_string(side) + "^" + std::to_string(d) +
                          " exceeds the node cap of " + std::to_string(limits.max_nodes));
    }
    n *= side;
  }
  check_cap(n, limits, "torus");
  std::vector<Edge> edges;
  edges.reserve(n * d);
  for (std::size_t node = 0; node < n; ++node) {
    std::size_t stride = 1;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t coord = (node / stride) % side;
      const std::size_t up = coord + 1 == side ? node - coord * stride : node + stride;
      edges.push_back({node, up});
      stride *= side;
    }
  }
  return Graph(n, std::move(edges));
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  const std::uint64_t state = mix64(seed) + (counter + 1) * kGamma;
  return static_cast<double>(mix64(state) >> 11) * 0x1.0p-53;
}

std::uint64_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept {
  const auto ii = static_cast<std::uint64_t>(i);
  return ii * n - ii * (ii + 1) / 2 + (j - i - 1);
}

Graph build_erdos_renyi(std::size_t n, double p, std::uint64_t seed, const BuildLimits& limits) {
  if (n < 1) throw InvalidArgument("G(n, p) needs n >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("G(n, p) needs 0 < p <= 1");
  check_cap(n, limits, "G(n, p)");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (counter_uniform(seed, pair_index(i, j, n)) < p) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges));
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.node_count() << '\n';
  for (const auto& e : g.edges()) out << e.a << ' ' << e.b << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    if (!have_header) {
      std::string tag;
      if (!(row >> tag >> n) || tag != "n")
        throw ParseError("edge list must start with 'n <count>' (line " + std::to_string(line_no) + ")", 0);
      have_header = true;
      continue;
    }
    Edge e;
    if (!(row >> e.a >> e.b))
      throw ParseError("malformed edge on line " + std::to_string(line_no), 0);
    edges.push_back(e);
  }
  if (!have_header) throw ParseError("empty edge list", 0);
  return Graph(n, std::move(edges));
}

GraphSpec parse_graph_spec(std::string_view text) {
  const auto tokens = detail::tokenize_spec(text);
  GraphSpec spec;
  std::vector<detail::SpecItem> positional;
  for (const auto& item : tokens.items) {
    if (item.key.empty()) {
      positional.push_back(item);
    } else if (item.key == "seed" && tokens.family == "er") {
      spec.has_seed = true;
      spec.seed = detail::parse_unsigned(item);
    } else {
      throw ParseError("unknown key '" + std::string(item.key) + "'", item.position - item.key.size() - 1);
    }
  }
  auto expect = [&](std::size_t count) {
    if (positional.size() != count) {
      throw ParseError("family '" + std::string(tokens.family) + "' expects " +
                           std::to_string(count) + " positional parameter(s)",
                       positional.size() > count ? positional[count].position : tokens.end);
    }
  };
  const auto& fam = tokens.family;
  if (fam == "ring" || fam == "star") {
    expect(1);
    spec.family = fam == "ring" ? GraphFamily::kRing : GraphFamily::kStar;
    spec.size = detail::parse_unsigned(positional[0]);
  } else if (fam == "dendrimer" || fam == "torus") {
    expect(2);
    spec.family = fam == "dendrimer" ? GraphFamily::kDendrimer : GraphFamily::kTorus;
    spec.size = detail::parse_unsigned(positional[0]);
    spec.secondary = detail::parse_unsigned(positional[1]);
  } else if (fam == "er") {
    expect(2);
    spec.family = GraphFamily::kErdosRenyi;
    spec.size = detail::parse_unsigned(positional[0]);
    spec.probability = detail::parse_double(positional[1]);
  } else {
    throw ParseError("unknown graph family '" + std::string(fam) + "'", 0);
  }
  return spec;
}

std::string to_string(const GraphSpec& spec) {
  std::ostringstream os;
  switch (spec.family) {
    case GraphFamily::kRing: os << "ring:" << spec.size; break;
    case GraphFamily::kStar: os << "star:" << spec.size; break;
    case GraphFamily::kDendrimer: os << "dendrimer:" << spec.size << ',' << spec.secondary; break;
    case GraphFamily::kTorus: os << "torus:" << spec.size << ',' << spec.secondary; break;
    case GraphFamily::kErdosRenyi:
      os << "er:" << spec.size << ',' << spec.probability;
      if (spec.has_seed) os << ",seed=" << spec.seed;
      break;
  }
  return os.str();
}

Graph build_graph(const GraphSpec& spec, std::uint64_t default_seed, const BuildLimits& limits) {
  switch (spec.family) {
    case GraphFamily::kRing: return build_ring(spec.size, limits);
    case GraphFamily::kStar: return build_star(spec.size, limits);
    case GraphFamily::kDendrimer: return build_dendrimer(spec.size, spec.secondary, limits);
    case GraphFamily::kTorus: return build_hypercubic(spec.size, spec.secondary, limits);
    case GraphFamily::kErdosRenyi:
      return build_erdos_renyi(spec.size, spec.probability, spec.has_seed ? spec.seed : default_seed,
                               limits);
  }
  throw InvalidArgument("unhandled graph family");
}

}  // namespace walkeff
