#pragma once

// End-to-end training of the projection matrix through the encoder's
// binary-network equivalent: shared dense projection, bipolar discretization
// with a straight-through gradient, band binding as multiplication by the
// bipolar band vectors, band summation, logistic sigmoid and binary
// cross-entropy against random per-class target hypervectors.
//
// Bit convention: a bit b corresponds to the bipolar value 2b - 1, so that
// D(r) = +1 for r >= 0 is the image of H(r) = 1, and XOR with a band bit c
// is multiplication by 1 - 2c. The band sum z then counts ones minus zeros
// of the bound band vectors and S = sigmoid(z) estimates P(bit = 1).

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hdemb/associative_memory.hpp"
#include "hdemb/dense_projection.hpp"
#include "hdemb/item_memory.hpp"
#include "hdemb/rng.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 50;
  double momentum = 0.9;
  double init_scale = 0.0;  // <= 0 selects 1/sqrt(n_R)
  RngSeed seed{};

  void validate() const;
};

struct LearnedModel {
  Eigen::MatrixXd weights;                // d x n_R
  std::vector<Hypervector> targets;       // P*, one per class
  std::vector<Hypervector> band_vectors;  // C_b from the item memory
  Eigen::MatrixXd band_signs;             // d x n_b, 1 - 2 C_b
  TrainConfig hyper;
  RngSeed item_memory_seed{};

  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights.rows()); }
  std::size_t n_features() const noexcept { return static_cast<std::size_t>(weights.cols()); }
  std::size_t n_classes() const noexcept { return targets.size(); }
  std::size_t n_bands() const noexcept { return band_vectors.size(); }

  friend bool operator==(const LearnedModel& a, const LearnedModel& b) {
    return a.weights == b.weights && a.targets == b.targets && a.band_vectors == b.band_vectors;
  }
};

struct LabeledFeatures {
  BandedFeatures features;
  int label = 0;  // 1-based
};

/// C~ = 1 - 2 C, one column per band.
Eigen::MatrixXd bipolar_band_signs(const ItemMemory& band_memory);

LearnedModel init_model(std::size_t n_features, std::size_t dim, std::size_t n_classes, std::size_t n_bands,
                        const ItemMemory& band_memory, const TrainConfig& cfg);

enum class Discretization {
  hard,     // D(r) = +1 if r >= 0 else -1, straight-through gradient
  identity  // D(r) = r, exact gradient; used for gradient checking
};

struct ForwardPass {
  Eigen::MatrixXd preactivations;  // r_b = W f_b, d x n_b
  Eigen::VectorXd logits;          // z = sum_b D(r_b) * C~_b
  Eigen::VectorXd output;          // S = sigmoid(z)
};

ForwardPass forward(const LearnedModel& model, const BandedFeatures& banded,
                    Discretization mode = Discretization::hard);

/// Binary hypervector obtained by thresholding S at 0.5 (ties -> 1).
Hypervector hard_output(const ForwardPass& pass);

/// Mean over components of the binary cross-entropy, with S clamped away
/// from 0 and 1.
double bce_loss(const Eigen::VectorXd& s, const Hypervector& target);

/// Same loss evaluated from the logits without clamping.
double bce_with_logits(const Eigen::VectorXd& z, const Hypervector& target);

/// Straight-through estimator: g_r = g_q * 1{|r| <= 1}.
inline double ste_gradient(double r, double upstream) { return std::abs(r) <= 1.0 ? upstream : 0.0; }

/// dL/dW given dL/dS at the output of a cached forward pass.
Eigen::MatrixXd backward_ste(const LearnedModel& model, const BandedFeatures& banded, const ForwardPass& pass,
                             const Eigen::VectorXd& grad_at_output, Discretization mode = Discretization::hard);

struct TrainHistory {
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;  // mean BCE over the dataset after each epoch
};

/// Mini-batch SGD with momentum on BCE(S, P*_label). The step uses the
/// gradient of the per-component loss summed over d and averaged over the
/// batch; reported losses are means over d.
LearnedModel train(LearnedModel model, std::span<const LabeledFeatures> dataset, const TrainConfig& cfg,
                   TrainHistory* history = nullptr);

/// Mean BCE over a dataset under the hard forward pass.
double dataset_loss(const LearnedModel& model, std::span<const LabeledFeatures> dataset);

struct ExportedModel {
  DenseProjection<double> projection;
  AssociativeMemory memory;  // prototypes are the training targets
};

ExportedModel export_model(const LearnedModel& model, bool float8_weights = false);

enum class WeightFormat : std::uint8_t { float32 = 0, float8 = 1 };

void save_learned_model(const LearnedModel& model, const std::filesystem::path& path,
                        WeightFormat format = WeightFormat::float32);
LearnedModel load_learned_model(const std::filesystem::path& path);

}  // namespace hdemb
