#include "walkeff/discrete_transport.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "walkeff/csv.hpp"
#include "walkeff/errors.hpp"
#include "walkeff/parallel.hpp"

namespace walkeff {
namespace {

// exp(-x) for x above this is below 1e-300 and flushed to zero.
constexpr double kUnderflowExponent = 690.7755;

std::vector<double> clamped_eigenvalues(const Spectrum& s) {
  const double tol = s.default_cluster_tol();
  std::vector<double> out(s.eigenvalues().begin(), s.eigenvalues().end());
  for (double& v : out) {
    if (v < -tol) {
      throw InvalidArgument("eigenvalue " + format_double(v) +
                            " is negative beyond tolerance; not a Laplacian spectrum");
    }
    v = std::max(v, 0.0);
  }
  return out;
}

double decay(double lambda, double t) {
  const double x = lambda * t;
  return x > kUnderflowExponent ? 0.0 : std::exp(-x);
}

void check_node(const Spectrum& s, std::size_t node) {
  if (node >= s.size()) {
    throw InvalidArgument("node index " + std::to_string(node) + " out of range for N = " +
                          std::to_string(s.size()));
  }
}

}  // namespace

std::vector<double> classical_return(const Spectrum& s, const TimeGrid& grid) {
  const auto lambda = clamped_eigenvalues(s);
  const double inv_n = 1.0 / static_cast<double>(lambda.size());
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    double sum = 0.0;
    // descending order adds the small terms first
    for (auto it = lambda.rbegin(); it != lambda.rend(); ++it) sum += decay(*it, t);
    out[i] = std::min(1.0, sum * inv_n);
  });
  return out;
}

std::vector<double> quantum_return_bound(const Spectrum& s, const TimeGrid& grid) {
  const auto lambda = clamped_eigenvalues(s);
  const double inv_n = 1.0 / static_cast<double>(lambda.size());
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    double c = 0.0;
    double sn = 0.0;
    for (double l : lambda) {
      c += std::cos(l * t);
      sn += std::sin(l * t);
    }
    c *= inv_n;
    sn *= inv_n;
    out[i] = std::min(1.0, c * c + sn * sn);
  });
  return out;
}

std::vector<double> exact_average_return(const Spectrum& s, const TimeGrid& grid) {
  const Eigen::MatrixXd& v = s.eigenvectors();
  const auto lambda = clamped_eigenvalues(s);
  const Eigen::Index n = v.rows();
  const Eigen::MatrixXd weights = v.cwiseProduct(v);  // (j, n) -> v_jn^2
  const Eigen::Map<const Eigen::VectorXd> lam(lambda.data(), n);

  std::vector<double> out(grid.size());
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(grid.size(), begin + kChunk);
    const auto width = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXd cosines(n, width);
    Eigen::MatrixXd sines(n, width);
    for (Eigen::Index col = 0; col < width; ++col) {
      const double t = grid[begin + static_cast<std::size_t>(col)];
      for (Eigen::Index k = 0; k < n; ++k) {
        cosines(k, col) = std::cos(lam(k) * t);
        sines(k, col) = std::sin(lam(k) * t);
      }
    }
    const Eigen::MatrixXd re = weights * cosines;
    const Eigen::MatrixXd im = weights * sines;
    for (Eigen::Index col = 0; col < width; ++col) {
      const double mean = (re.col(col).squaredNorm() + im.col(col).squaredNorm()) / static_cast<double>(n);
      out[begin + static_cast<std::size_t>(col)] = std::min(1.0, mean);
    }
  });
  return out;
}

TransportSeries transport_series(const Spectrum& s, const TimeGrid& grid, bool with_exact) {
  TransportSeries series{grid, classical_return(s, grid), quantum_return_bound(s, grid), std::nullopt};
  if (with_exact) series.pi_bar = exact_average_return(s, grid);
  return series;
}

double pairwise_classical(const Spectrum& s, std::size_t j, std::size_t k, double t) {
  check_node(s, j);
  check_node(s, k);
  const Eigen::MatrixXd& v = s.eigenvectors();
  const auto lambda = clamped_eigenvalues(s);
  const auto jj = static_cast<Eigen::Index>(j);
  const auto kk = static_cast<Eigen::Index>(k);
  double sum = 0.0;
  for (Eigen::Index n = 0; n < v.cols(); ++n) sum += v(kk, n) * v(jj, n) * decay(lambda[n], t);
  return sum;
}

double pairwise_quantum(const Spectrum& s, std::size_t j, std::size_t k, double t) {
  check_node(s, j);
  check_node(s, k);
  const Eigen::MatrixXd& v = s.eigenvectors();
  const auto lambda = clamped_eigenvalues(s);
  const auto jj = static_cast<Eigen::Index>(j);
  const auto kk = static_cast<Eigen::Index>(k);
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index n = 0; n < v.cols(); ++n) {
    const double w = v(kk, n) * v(jj, n);
    re += w * std::cos(lambda[n] * t);
    im -= w * std::sin(lambda[n] * t);
  }
  return re * re + im * im;
}

Eigen::MatrixXd classical_propagator(const Spectrum& s, double t) {
  const Eigen::MatrixXd& v = s.eigenvectors();
  const auto lambda = clamped_eigenvalues(s);
  Eigen::VectorXd d(v.cols());
  for (Eigen::Index n = 0; n < v.cols(); ++n) d(n) = decay(lambda[n], t);
  return v * d.asDiagonal() * v.transpose();
}

Eigen::MatrixXd quantum_transition_probabilities(const Spectrum& s, double t) {
  const Eigen::MatrixXd& v = s.eigenvectors();
  const auto lambda = clamped_eigenvalues(s);
  Eigen::VectorXd c(v.cols());
  Eigen::VectorXd sn(v.cols());
  for (Eigen::Index n = 0; n < v.cols(); ++n) {
    c(n) = std::cos(lambda[n] * t);
    sn(n) = std::sin(lambda[n] * t);
  }
  const Eigen::MatrixXd re = v * c.asDiagonal() * v.transpose();
  const Eigen::MatrixXd im = v * sn.asDiagonal() * v.transpose();
  return re.cwiseProduct(re) + im.cwiseProduct(im);
}

ChiMatrix chi_matrix(const Spectrum& s, double cluster_tol) {
  const Eigen::MatrixXd& v = s.eigenvectors();
  const Eigen::Index n = v.rows();
  const auto levels = degeneracy_table(s, cluster_tol);

  std::vector<Eigen::Index> singles;
  for (const auto& level : levels) {
    if (level.multiplicity == 1) singles.push_back(static_cast<Eigen::Index>(level.first_index));
  }
  Eigen::MatrixXd single_weights(n, static_cast<Eigen::Index>(singles.size()));
  for (std::size_t c = 0; c < singles.size(); ++c) {
    single_weights.col(static_cast<Eigen::Index>(c)) = v.col(singles[c]).cwiseAbs2();
  }
  ChiMatrix chi{single_weights * single_weights.transpose()};

  for (const auto& level : levels) {
    if (level.multiplicity == 1) continue;
    const auto block = v.middleCols(static_cast<Eigen::Index>(level.first_index),
                                    static_cast<Eigen::Index>(level.multiplicity));
    const Eigen::MatrixXd projector = block * block.transpose();
    chi.values += projector.cwiseProduct(projector);
  }
  return chi;
}

ChiMatrix chi_matrix(const Spectrum& s) { return chi_matrix(s, s.default_cluster_tol()); }

double bound_time_average(const Spectrum& s, double cluster_tol) {
  const double n = static_cast<double>(s.size());
  double sum = 0.0;
  for (const auto& level : degeneracy_table(s, cluster_tol)) {
    const double g = static_cast<double>(level.multiplicity);
    sum += g * g;
  }
  return sum / (n * n);
}

void write_series_csv(std::ostream& out, const TransportSeries& series) {
  out << "t,p_bar,alpha_bar_sq";
  if (series.pi_bar) out << ",pi_bar";
  out << '\n';
  for (std::size_t i = 0; i < series.grid.size(); ++i) {
    out << format_double(series.grid[i]) << ',' << format_double(series.p_bar[i]) << ','
        << format_double(series.alpha_bar_sq[i]);
    if (series.pi_bar) out << ',' << format_double((*series.pi_bar)[i]);
    out << '\n';
  }
}

void write_chi_csv(std::ostream& out, const ChiMatrix& chi) {
  const Eigen::Index n = chi.values.rows();
  out << "node";
  for (Eigen::Index j = 0; j < n; ++j) out << ',' << j;
  out << '\n';
  for (Eigen::Index k = 0; k < n; ++k) {
    out << k;
    for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_double(chi.values(k, j));
    out << '\n';
  }
}

}  // namespace walkeff
