#pragma once

// Associative memory: per-class prototype accumulation and binarization,
// nearest-prototype classification and multi-prototype HD k-means.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "hdemb/hypervector.hpp"
#include "hdemb/rng.hpp"

namespace hdemb {

/// Encoder output: binary (clipped) or integer counts (unclipped).
using EncodedTrial = std::variant<Hypervector, Accumulator>;

/// n_cl classes x k prototypes, stored class-major. Labels are 1-based.
class AssociativeMemory {
 public:
  AssociativeMemory() = default;
  AssociativeMemory(std::size_t n_classes, std::size_t k, std::vector<Hypervector> prototypes,
                    std::vector<std::uint64_t> counts);

  std::size_t n_classes() const noexcept { return n_classes_; }
  std::size_t prototypes_per_class() const noexcept { return k_; }
  std::size_t size() const noexcept { return prototypes_.size(); }
  bool empty() const noexcept { return prototypes_.empty(); }
  std::size_t dim() const noexcept { return prototypes_.empty() ? 0 : prototypes_.front().dim(); }

  /// Prototype `slot` (0-based) of class `label` (1-based).
  const Hypervector& prototype(int label, std::size_t slot = 0) const;
  std::span<const Hypervector> prototypes() const noexcept { return prototypes_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  friend bool operator==(const AssociativeMemory&, const AssociativeMemory&) = default;

 private:
  std::size_t n_classes_ = 0;
  std::size_t k_ = 1;
  std::vector<Hypervector> prototypes_;
  std::vector<std::uint64_t> counts_;
};

/// One prototype per class. Clipped inputs add bits and count 1; unclipped
/// inputs add their counts and their n_added. Classes are binarized in label
/// order, each drawing its even-count tie vector from `rng`.
/// Throws InvalidState naming every class without samples.
AssociativeMemory am_train(std::span<const EncodedTrial> encoded, std::span<const int> labels,
                           std::size_t n_classes, Rng& rng);

struct Classification {
  int label = 0;
  std::size_t slot = 0;
  double distance = 0.0;
};

/// argmin over classes of the min over the class's prototypes; ties go to
/// the lowest class id, then the lowest slot.
Classification am_classify_detail(const AssociativeMemory& am, const Hypervector& q);

inline int am_classify(const AssociativeMemory& am, const Hypervector& q) {
  return am_classify_detail(am, q).label;
}

enum class Seeding { random, d_squared };

struct ClusteringRun {
  std::vector<Hypervector> centroids;
  std::vector<std::size_t> assignment;
  /// Total within-cluster Hamming distance (bits) after every assignment step.
  std::vector<std::uint64_t> objective_history;
  std::uint64_t objective = 0;
  std::size_t iterations = 0;
};

/// One k-means run with Hamming distance and majority-bundle centroids.
/// Stops when assignments are stable or after max_iters. Throws
/// InvalidArgument if k > samples.
ClusteringRun hd_kmeans(std::span<const Hypervector> samples, std::size_t k, std::size_t max_iters,
                        Seeding seeding, Rng& rng);

struct KMeansConfig {
  std::size_t k = 1;
  std::size_t restarts = 10;
  std::size_t max_iters = 100;
  Seeding seeding = Seeding::random;
};

/// Seed of restart `restart` for class index `class_index` (0-based).
RngSeed kmeans_restart_seed(RngSeed seed, std::size_t class_index, std::size_t restart);

/// Per class, the restart with the lowest objective (first one on ties).
AssociativeMemory am_kmeans(std::span<const std::vector<Hypervector>> per_class, const KMeansConfig& cfg,
                            RngSeed seed);

/// Pairwise normalized Hamming distances between all prototypes.
Eigen::MatrixXd prototype_similarity(const AssociativeMemory& am);

void save_associative_memory(const AssociativeMemory& am, const std::filesystem::path& path);
AssociativeMemory load_associative_memory(const std::filesystem::path& path);

}  // namespace hdemb
