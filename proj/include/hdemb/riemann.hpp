#pragma once

// Tangent-space features of band-limited spatial covariances: regularized
// covariance, whitening by the inverse square root of the mean training
// covariance, matrix logarithm and norm-preserving half-vectorization,
// followed by train-set standardization.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hdemb/filter_bank.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

inline constexpr double kDefaultCovarianceAlpha = 0.1;

/// C = (X X^T + alpha I) / (n_s - 1). Throws InvalidArgument for n_s < 2.
Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& x, double alpha = kDefaultCovarianceAlpha);

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// Eigendecomposition of (m + m^T) / 2. Throws NumericError on non-finite values.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m);

/// U g(Lambda) U^T for a scalar function g.
template <typename Fn>
Eigen::MatrixXd spectral_apply(const SymmetricEigen& e, Fn&& g) {
  const Eigen::VectorXd mapped = e.values.unaryExpr(g);
  return e.vectors * mapped.asDiagonal() * e.vectors.transpose();
}

/// True when every eigenvalue is > 0.
bool is_positive_definite(const Eigen::MatrixXd& m);

/// C_ref^{-1/2} of the arithmetic mean of the training covariances.
/// Throws InvalidArgument when empty and NumericError (with the minimum
/// eigenvalue) if the mean is not positive definite.
Eigen::MatrixXd fit_reference(std::span<const Eigen::MatrixXd> covariances);

/// Upper triangle in row-major order, off-diagonal entries scaled by sqrt(2),
/// so that the Euclidean norm of the result equals the Frobenius norm of m.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> half_vectorize(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n * (n + 1) / 2);
  const Scalar root2 = std::sqrt(Scalar(2));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out[k++] = m(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) out[k++] = root2 * m(i, j);
  }
  return out;
}

/// Inverse of half_vectorize for symmetric matrices.
Eigen::MatrixXd half_unvectorize(const FeatureVector& f);

/// vect(logm(W C W)) for whitener W.
FeatureVector riemann_features(const Eigen::MatrixXd& covariance, const Eigen::MatrixXd& whitener);

struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // population; zero marks a constant feature

  friend bool operator==(const Standardization& a, const Standardization& b) {
    return a.mean.size() == b.mean.size() && a.mean == b.mean && a.stddev == b.stddev;
  }
};

/// Throws InvalidArgument with fewer than two vectors.
Standardization fit_standardization(std::span<const FeatureVector> train);

/// (f - mean) / std; zero-variance features become 0.
FeatureVector apply_standardization(const FeatureVector& f, const Standardization& stats);

struct RiemannConfig {
  FilterBankConfig filter_bank;
  double alpha = kDefaultCovarianceAlpha;
};

struct RiemannState {
  double alpha = kDefaultCovarianceAlpha;
  double fs = 0.0;  // sampling rate the filter bank was designed for
  std::vector<Band> bands;
  std::vector<Eigen::MatrixXd> whiteners;  // one per band
  std::vector<Standardization> stats;      // one per band

  std::size_t n_bands() const noexcept { return bands.size(); }
  std::size_t n_features() const noexcept { return stats.empty() ? 0 : static_cast<std::size_t>(stats.front().mean.size()); }

  friend bool operator==(const RiemannState& a, const RiemannState& b) {
    if (a.alpha != b.alpha || a.fs != b.fs || a.bands != b.bands || a.stats != b.stats || a.whiteners.size() != b.whiteners.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.whiteners.size(); ++i) {
      if (a.whiteners[i].rows() != b.whiteners[i].rows() || a.whiteners[i] != b.whiteners[i]) return false;
    }
    return true;
  }
};

/// Per band covariance of one trial.
std::vector<Eigen::MatrixXd> band_covariances(const TrialTensor& trial, const std::vector<FilterCoefficients>& filters,
                                              double alpha);

/// Fits whiteners and standardization statistics on training trials only.
RiemannState fit_riemann(std::span<const TrialTensor> train, const RiemannConfig& cfg, std::size_t threads = 1);

/// Standardized banded features of one trial (n_R x n_b).
BandedFeatures transform_trial(const RiemannState& state, const std::vector<FilterCoefficients>& filters,
                               const TrialTensor& trial);

std::vector<BandedFeatures> transform_trials(const RiemannState& state, std::span<const TrialTensor> trials,
                                             std::size_t threads = 1);

void save_riemann_state(const RiemannState& state, const std::filesystem::path& path);
RiemannState load_riemann_state(const std::filesystem::path& path);

}  // namespace hdemb
