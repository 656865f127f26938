#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "hdemb/hypervector.hpp"

namespace hdemb {

/// One trial of multichannel samples: n_ch rows, n_s columns.
struct TrialTensor {
  Eigen::MatrixXd samples;
  double fs = 0.0;

  std::size_t channels() const noexcept { return static_cast<std::size_t>(samples.rows()); }
  std::size_t length() const noexcept { return static_cast<std::size_t>(samples.cols()); }

  friend bool operator==(const TrialTensor& a, const TrialTensor& b) {
    return a.fs == b.fs && a.samples.rows() == b.samples.rows() && a.samples.cols() == b.samples.cols() &&
           a.samples == b.samples;
  }
};

/// Real feature vector of one frequency band, length n_R.
using FeatureVector = Eigen::VectorXd;

/// Multi-band features: n_R rows, one column per band.
using BandedFeatures = Eigen::MatrixXd;

/// Number of tangent-space features for an n_ch x n_ch covariance.
constexpr std::size_t riemann_feature_count(std::size_t n_channels) noexcept {
  return n_channels * (n_channels + 1) / 2;
}

/// Maps one band's feature vector to a binary hypervector.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t dim() const = 0;
  virtual Hypervector embed(const FeatureVector& f) const = 0;
};

}  // namespace hdemb
