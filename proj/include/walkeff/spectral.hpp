#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "walkeff/graph.hpp"

namespace walkeff {

/// A cluster of (numerically) degenerate eigenvalues. The spectrum is
/// sorted, so a cluster is the contiguous index range
/// [first_index, first_index + multiplicity).
struct DegenerateLevel {
  double value = 0.0;  // cluster mean
  std::size_t multiplicity = 0;
  std::size_t first_index = 0;
};

/// Sorted Laplacian eigenvalues, optionally with orthonormal eigenvectors
/// (column k belongs to eigenvalue k, first nonzero component positive).
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> eigenvalues,
                    std::optional<Eigen::MatrixXd> eigenvectors = std::nullopt);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> eigenvalues() const noexcept { return values_; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  bool has_vectors() const noexcept { return vectors_.has_value(); }
  /// Throws ContractViolation when the spectrum was computed without vectors.
  const Eigen::MatrixXd& eigenvectors() const;

  /// Default clustering tolerance 1e-8 * max(1, lambda_max).
  double default_cluster_tol() const noexcept;

 private:
  std::vector<double> values_;
  std::optional<Eigen::MatrixXd> vectors_;
};

/// Dense symmetric eigensolve of the Laplacian. Throws NumericalFailure if
/// the solver does not converge.
Spectrum decompose(const Laplacian& l, bool with_vectors);

/// Merges consecutive eigenvalues lying within cluster_tol of the running
/// cluster mean. Multiplicities sum to the spectrum size.
std::vector<DegenerateLevel> degeneracy_table(const Spectrum& s, double cluster_tol);
std::vector<DegenerateLevel> degeneracy_table(const Spectrum& s);

/// Empirical density of states. `density[k] * width` is the fraction of
/// eigenvalues in bin k; the last bin is closed on the right.
struct DosHistogram {
  std::vector<double> edges;    // bins + 1 entries
  std::vector<double> density;  // bins entries

  double bin_width(std::size_t k) const { return edges[k + 1] - edges[k]; }
  double mass(std::size_t k) const { return density[k] * bin_width(k); }
};

DosHistogram dos_histogram(const Spectrum& s, std::size_t bins);

// CSV exports: "index,eigenvalue" and "value,multiplicity".
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
void write_degeneracy_csv(std::ostream& out, std::span<const DegenerateLevel> levels);

}  // namespace walkeff
