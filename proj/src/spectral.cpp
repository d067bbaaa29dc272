#include "walkeff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "walkeff/csv.hpp"
#include "walkeff/errors.hpp"

namespace walkeff {
namespace {

constexpr double kSignThreshold = 1e-12;

void fix_signs(Eigen::MatrixXd& v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, k)) > kSignThreshold) {
        if (v(i, k) < 0.0) v.col(k) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> eigenvalues, std::optional<Eigen::MatrixXd> eigenvectors)
    : values_(std::move(eigenvalues)), vectors_(std::move(eigenvectors)) {
  if (values_.empty()) throw InvalidArgument("spectrum must not be empty");
  if (!std::is_sorted(values_.begin(), values_.end()))
    throw InvalidArgument("eigenvalues must be sorted ascending");
  if (vectors_) {
    const auto n = static_cast<Eigen::Index>(values_.size());
    if (vectors_->rows() != n || vectors_->cols() != n)
      throw InvalidArgument("eigenvector matrix must be n x n");
  }
}

const Eigen::MatrixXd& Spectrum::eigenvectors() const {
  if (!vectors_) throw ContractViolation("spectrum was computed without eigenvectors");
  return *vectors_;
}

double Spectrum::default_cluster_tol() const noexcept {
  return 1e-8 * std::max(1.0, std::abs(values_.back()));
}

Spectrum decompose(const Laplacian& l, bool with_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      l.matrix(), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge for a " +
                           std::to_string(l.size()) + "x" + std::to_string(l.size()) + " matrix");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> values(ev.data(), ev.data() + ev.size());
  if (!with_vectors) return Spectrum(std::move(values));
  Eigen::MatrixXd vectors = solver.eigenvectors();
  fix_signs(vectors);
  return Spectrum(std::move(values), std::move(vectors));
}

std::vector<DegenerateLevel> degeneracy_table(const Spectrum& s, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw InvalidArgument("cluster tolerance must be positive");
  const auto values = s.eigenvalues();
  std::vector<DegenerateLevel> levels;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!levels.empty() && std::abs(values[i] - levels.back().value) <= cluster_tol) {
      auto& cur = levels.back();
      sum += values[i];
      ++cur.multiplicity;
      cur.value = sum / static_cast<double>(cur.multiplicity);
    } else {
      levels.push_back({values[i], 1, i});
      sum = values[i];
    }
  }
  return levels;
}

std::vector<DegenerateLevel> degeneracy_table(const Spectrum& s) {
  return degeneracy_table(s, s.default_cluster_tol());
}

DosHistogram dos_histogram(const Spectrum& s, std::size_t bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  double lo = s.min();
  double hi = s.max();
  if (hi - lo <= 0.0) {
    lo -= 0.5;
    hi += 0.5;
  }
  DosHistogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + width * static_cast<double>(k);
  h.edges.back() = hi;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : s.eigenvalues()) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    k = std::min(k, bins - 1);
    // guard against rounding at interior edges
    while (k > 0 && v < h.edges[k]) --k;
    while (k + 1 < bins && v >= h.edges[k + 1]) ++k;
    ++counts[k];
  }
  h.density.resize(bins);
  const double n = static_cast<double>(s.size());
  for (std::size_t k = 0; k < bins; ++k) h.density[k] = static_cast<double>(counts[k]) / (n * h.bin_width(k));
  return h;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "index,eigenvalue\n";
  const auto values = s.eigenvalues();
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
}

void write_degeneracy_csv(std::ostream& out, std::span<const DegenerateLevel> levels) {
  out << "value,multiplicity\n";
  for (const auto& level : levels) out << format_double(level.value) << ',' << level.multiplicity << '\n';
}

}  // namespace walkeff
