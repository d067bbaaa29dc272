#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "walkeff/spectral.hpp"
#include "walkeff/time_grid.hpp"

namespace walkeff {

/// Averaged return probabilities sampled on a time grid.
///   p_bar        classical (1/N) sum_j p_jj(t)
///   alpha_bar_sq eigenvalue-only lower bound |(1/N) sum_n exp(-i lambda_n t)|^2
///   pi_bar       exact quantum (1/N) sum_j pi_jj(t), needs eigenvectors
struct TransportSeries {
  TimeGrid grid;
  std::vector<double> p_bar;
  std::vector<double> alpha_bar_sq;
  std::optional<std::vector<double>> pi_bar;
};

/// p_bar(t) = (1/N) sum_n exp(-lambda_n t). Eigenvalues in [-tol, 0) are
/// clamped to 0, terms below 1e-300 are flushed to 0.
std::vector<double> classical_return(const Spectrum& s, const TimeGrid& grid);

/// |alpha_bar(t)|^2 from cosine and sine accumulators.
std::vector<double> quantum_return_bound(const Spectrum& s, const TimeGrid& grid);

/// pi_bar(t) = (1/N) sum_j |sum_n exp(-i lambda_n t) v_jn^2|^2.
/// Throws ContractViolation without eigenvectors.
std::vector<double> exact_average_return(const Spectrum& s, const TimeGrid& grid);

TransportSeries transport_series(const Spectrum& s, const TimeGrid& grid, bool with_exact);

/// p_{k,j}(t) = <k| exp(-L t) |j>.
double pairwise_classical(const Spectrum& s, std::size_t j, std::size_t k, double t);
/// pi_{k,j}(t) = |<k| exp(-i L t) |j>|^2.
double pairwise_quantum(const Spectrum& s, std::size_t j, std::size_t k, double t);

/// Full propagators, entry (k, j) as in the pairwise functions.
Eigen::MatrixXd classical_propagator(const Spectrum& s, double t);
Eigen::MatrixXd quantum_transition_probabilities(const Spectrum& s, double t);

/// Long-time average chi_{k,j} of pi_{k,j}(t). Degenerate eigenvalues are
/// grouped with degeneracy_table(s, cluster_tol); the cross terms inside a
/// cluster survive the time average, so the clustering tolerance matters.
struct ChiMatrix {
  Eigen::MatrixXd values;
};

ChiMatrix chi_matrix(const Spectrum& s, double cluster_tol);
ChiMatrix chi_matrix(const Spectrum& s);

/// Time average of |alpha_bar(t)|^2, sum over clusters of g^2 / N^2.
double bound_time_average(const Spectrum& s, double cluster_tol);

// "t,p_bar,alpha_bar_sq[,pi_bar]" with shortest round-trip doubles.
void write_series_csv(std::ostream& out, const TransportSeries& series);
// Header row "node,0,1,...", then one row per k.
void write_chi_csv(std::ostream& out, const ChiMatrix& chi);

}  // namespace walkeff
