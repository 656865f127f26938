#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "hdemb/errors.hpp"
#include "hdemb/float8.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

/// Dense real projection d x n_R used for inference, E = H(W f).
template <typename Scalar>
class DenseProjection {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  DenseProjection() = default;
  explicit DenseProjection(Matrix weights) : weights_(std::move(weights)) {}

  std::size_t rows() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(weights_.cols()); }
  const Matrix& weights() const noexcept { return weights_; }

  /// W f. The learned-projection forward pass goes through this same
  /// product so both paths round identically.
  template <typename Derived>
  Vector preactivation(const Eigen::MatrixBase<Derived>& f) const {
    if (f.size() != weights_.cols()) {
      throw InvalidArgument("DenseProjection: expected " + std::to_string(weights_.cols()) +
                            " features, got " + std::to_string(f.size()));
    }
    const Vector x = f.template cast<Scalar>();
    return weights_ * x;
  }

  template <typename Derived>
  Hypervector binarize(const Eigen::MatrixBase<Derived>& f) const {
    const Vector r = preactivation(f);
    Hypervector out(rows());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (r[i] >= Scalar(0)) out.set(static_cast<std::size_t>(i), true);
    }
    return out;
  }

  /// Copy with every weight rounded through 8-bit floats after scaling the
  /// largest magnitude to the float8 range. Row signs of W f are invariant
  /// under the common scale, so the scale is not undone.
  DenseProjection quantized_float8() const {
    const Scalar peak = weights_.cwiseAbs().maxCoeff();
    const Scalar scale = peak > Scalar(0) ? Scalar(float8::kMax) / peak : Scalar(1);
    Matrix q = weights_.unaryExpr([scale](Scalar w) {
      return static_cast<Scalar>(float8::round_trip(static_cast<double>(w * scale)));
    });
    return DenseProjection(std::move(q));
  }

 private:
  Matrix weights_;
};

template <typename Scalar>
class DenseProjectionEmbedder final : public Embedder {
 public:
  explicit DenseProjectionEmbedder(DenseProjection<Scalar> projection) : projection_(std::move(projection)) {}

  std::size_t input_dim() const override { return projection_.cols(); }
  std::size_t dim() const override { return projection_.rows(); }
  Hypervector embed(const FeatureVector& f) const override { return projection_.binarize(f); }

  const DenseProjection<Scalar>& projection() const noexcept { return projection_; }

 private:
  DenseProjection<Scalar> projection_;
};

}  // namespace hdemb
