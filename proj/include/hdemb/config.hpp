#pragma once

// Flat key=value experiment configuration with typed access and a fully
// resolved form that reproduces a run.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdemb/associative_memory.hpp"
#include "hdemb/encoder.hpp"
#include "hdemb/filter_bank.hpp"
#include "hdemb/learned_projection.hpp"
#include "hdemb/rng.hpp"
#include "hdemb/synthetic.hpp"

namespace hdemb {

/// Ordered key=value pairs. Lines starting with '#' and blank lines are
/// ignored; later assignments override earlier ones.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text, const std::string& source = "<text>");
  static ConfigMap from_file(const std::filesystem::path& path);

  /// Applies one "key=value" override. Throws ConfigError if malformed.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// "a-b,c-d,..." or one of the named families "3class" / "4class".
FilterBankConfig parse_bands(const std::string& text);
std::string format_bands(const std::vector<Band>& bands);

struct SynthOptions {
  std::size_t n_classes = 3;
  std::size_t n_channels = 16;
  std::size_t n_samples = 256;
  double fs = 128.0;
  std::size_t n_sessions = 4;
  std::size_t trials_per_session = 24;
  std::vector<Band> bands{{8.0, 12.0}, {16.0, 20.0}, {24.0, 28.0}};
  double baseline = 1.0;
  double boost = 2.0;
  std::size_t active_channels = 8;
  double jitter = 0.05;
  double noise = 0.7;
  std::uint64_t seed = 1;

  SynthSpec to_spec() const;
};

struct ExperimentConfig {
  // Data: a dataset file, or the synthetic generator when empty.
  std::string data_path;
  double csv_fs = 250.0;  // sampling rate for CSV manifests
  SynthOptions synth;

  // Features.
  std::string bands_text = "3class";
  double alpha = 0.1;

  // Embedding and encoder.
  EmbeddingKind embedding = EmbeddingKind::thermometer;
  std::size_t dim = 0;  // 0: n_R * q for quantizers, 10000 for projections
  std::size_t bits_per_feature = 8;
  double clip_range = 3.0;
  double sparsity = 0.1;
  bool float8_weights = false;
  TrainConfig train;
  bool clip_output = true;

  // Associative memory.
  KMeansConfig am;

  // Evaluation.
  std::size_t folds = 4;
  bool by_session = true;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  static ExperimentConfig from_map(const ConfigMap& map);
  ConfigMap to_map() const;

  FilterBankConfig filter_bank() const { return parse_bands(bands_text); }

  /// Structural checks that need no data. Throws ConfigError.
  void validate() const;

  /// Embedding dimension for a given channel count; throws ConfigError when
  /// an explicit dim disagrees with a quantizer's n_R * q.
  std::size_t resolved_dim(std::size_t n_channels) const;

  // Seeds of the individual streams, all derived from `seed`.
  RngSeed item_memory_seed() const { return derive_seed(RngSeed{seed}, stream::kItemMemory); }
  RngSeed permutation_seed() const { return derive_seed(RngSeed{seed}, stream::kPermutation); }
  RngSeed projection_seed() const { return derive_seed(RngSeed{seed}, stream::kProjection); }
  RngSeed learned_seed(std::size_t fold) const { return derive_seed(RngSeed{seed}, stream::kLearned, fold); }
  RngSeed tie_seed() const { return derive_seed(RngSeed{seed}, stream::kEncoderTies); }
  RngSeed am_seed(std::size_t fold) const { return derive_seed(RngSeed{seed}, stream::kAssociative, fold); }
  RngSeed kmeans_seed(std::size_t fold) const { return derive_seed(RngSeed{seed}, stream::kKMeans, fold); }
  RngSeed fold_seed() const { return derive_seed(RngSeed{seed}, stream::kFolds); }
};

}  // namespace hdemb
