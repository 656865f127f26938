#include "hdemb/random_projection.hpp"

#include <string>

#include "hdemb/errors.hpp"

namespace hdemb {

SparseProjection SparseProjection::generate(std::size_t rows, std::size_t cols, double sparsity,
                                            RngSeed seed) {
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    throw InvalidArgument("gen_projection: sparsity must lie in (0, 1], got " + std::to_string(sparsity));
  }
  if (rows == 0 || cols == 0) throw InvalidArgument("gen_projection: empty shape");
  SparseProjection p;
  p.rows_ = rows;
  p.cols_ = cols;
  p.sparsity_ = sparsity;
  p.seed_ = seed;
  p.row_start_.reserve(rows + 1);
  const auto expected = static_cast<std::size_t>(sparsity * static_cast<double>(rows * cols) * 1.05) + 16;
  p.columns_.reserve(expected);
  p.signs_.reserve(expected);

  Rng rng(seed);
  const double half = sparsity / 2.0;
  for (std::size_t r = 0; r < rows; ++r) {
    p.row_start_.push_back(p.columns_.size());
    for (std::size_t c = 0; c < cols; ++c) {
      const double u = rng.uniform();
      if (u < half) {
        p.columns_.push_back(static_cast<std::uint32_t>(c));
        p.signs_.push_back(1);
      } else if (u < sparsity) {
        p.columns_.push_back(static_cast<std::uint32_t>(c));
        p.signs_.push_back(-1);
      }
    }
  }
  p.row_start_.push_back(p.columns_.size());
  return p;
}

int SparseProjection::entry(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) throw InvalidArgument("SparseProjection::entry: out of range");
  for (std::size_t k = row_start_[row]; k < row_start_[row + 1]; ++k) {
    if (columns_[k] == col) return signs_[k];
  }
  return 0;
}

Eigen::MatrixXd SparseProjection::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      m(static_cast<Eigen::Index>(r), columns_[k]) = signs_[k];
    }
  }
  return m;
}

Eigen::VectorXd SparseProjection::apply(const FeatureVector& f) const {
  if (static_cast<std::size_t>(f.size()) != cols_) {
    throw InvalidArgument("project: expected " + std::to_string(cols_) + " features, got " +
                          std::to_string(f.size()));
  }
  Eigen::VectorXd z(static_cast<Eigen::Index>(rows_));
  const double* x = f.data();
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      if (signs_[k] > 0) {
        acc += x[columns_[k]];
      } else {
        acc -= x[columns_[k]];
      }
    }
    z[static_cast<Eigen::Index>(r)] = acc;
  }
  return z;
}

Hypervector project_binarize(const SparseProjection& r, const FeatureVector& f) {
  const Eigen::VectorXd z = r.apply(f);
  Hypervector out(r.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] >= 0.0) out.set(static_cast<std::size_t>(i), true);
  }
  return out;
}

}  // namespace hdemb
