#pragma once

// Sparse tripolar random projection to Hamming space, E = H(R f), with one
// matrix shared across bands. Only (d, n_R, s, seed) need persisting.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hdemb/rng.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

class SparseProjection {
 public:
  /// Entries are +1 w.p. s/2, -1 w.p. s/2, 0 otherwise, drawn row-major from
  /// the seeded stream. Throws InvalidArgument unless 0 < s <= 1.
  static SparseProjection generate(std::size_t rows, std::size_t cols, double sparsity, RngSeed seed);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double sparsity() const noexcept { return sparsity_; }
  RngSeed seed() const noexcept { return seed_; }
  std::size_t nonzeros() const noexcept { return columns_.size(); }

  /// Entry value in {-1, 0, +1}.
  int entry(std::size_t row, std::size_t col) const;

  /// Dense copy, mainly for tests.
  Eigen::MatrixXd to_dense() const;

  /// R f using additions and subtractions over the nonzeros only.
  Eigen::VectorXd apply(const FeatureVector& f) const;

  friend bool operator==(const SparseProjection&, const SparseProjection&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double sparsity_ = 0.0;
  RngSeed seed_{};
  // Row-sorted coordinate storage: row r owns [row_start_[r], row_start_[r+1]).
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> columns_;
  std::vector<std::int8_t> signs_;
};

inline SparseProjection gen_projection(std::size_t d, std::size_t n_features, double s, RngSeed seed) {
  return SparseProjection::generate(d, n_features, s, seed);
}

/// bit_i = 1 iff (R f)_i >= 0.
Hypervector project_binarize(const SparseProjection& r, const FeatureVector& f);

class RandomProjectionEmbedder final : public Embedder {
 public:
  explicit RandomProjectionEmbedder(SparseProjection projection) : projection_(std::move(projection)) {}

  std::size_t input_dim() const override { return projection_.cols(); }
  std::size_t dim() const override { return projection_.rows(); }
  Hypervector embed(const FeatureVector& f) const override { return project_binarize(projection_, f); }

  const SparseProjection& projection() const noexcept { return projection_; }

 private:
  SparseProjection projection_;
};

}  // namespace hdemb
