#pragma once

// End-to-end pipeline: filter bank and tangent-space features, embedding,
// spatial encoder and associative memory, with cross-validation, model
// persistence and a timing harness.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hdemb/config.hpp"
#include "hdemb/dataset.hpp"
#include "hdemb/encoder.hpp"
#include "hdemb/learned_projection.hpp"
#include "hdemb/report.hpp"
#include "hdemb/riemann.hpp"

namespace hdemb {

struct Pipeline {
  ExperimentConfig config;
  RiemannState features;
  std::vector<FilterCoefficients> filters;
  std::shared_ptr<const Embedder> embedder;
  ItemMemory bands;
  AssociativeMemory memory;
  std::optional<LearnedModel> learned;

  std::size_t dim() const noexcept { return bands.dim(); }
};

/// Dataset file (".csv" manifests are imported) or the synthetic generator.
TrialDataset load_experiment_data(const ExperimentConfig& cfg);

/// Embedder for the non-learned kinds, rematerialized from the config seeds.
std::shared_ptr<const Embedder> make_embedder(const ExperimentConfig& cfg, std::size_t n_features, std::size_t dim);

/// Fits every stage on ds[train] only. `fold` selects the fold-specific
/// training streams.
Pipeline fit_pipeline(const ExperimentConfig& cfg, const TrialDataset& ds, std::span<const std::size_t> train,
                      std::size_t fold = 0, StageTimes* times = nullptr);

/// Encoder output of one trial; `trial_index` selects its tie stream.
EncodedTrial encode_features(const Pipeline& p, const BandedFeatures& banded, std::size_t trial_index);

std::vector<int> predict(const Pipeline& p, const TrialDataset& ds, std::span<const std::size_t> indices,
                         StageTimes* times = nullptr);

/// Throws ConfigError when the data disagrees with the configuration.
void check_compatible(const ExperimentConfig& cfg, const TrialDataset& ds);

RunReport run_experiment(const ExperimentConfig& cfg, const TrialDataset& ds);

void save_pipeline(const Pipeline& p, const std::filesystem::path& dir);
Pipeline load_pipeline(const std::filesystem::path& dir);

/// Per-trial stage timings over `repeats` runs on the first fold, after one
/// untimed warm-up run; single-threaded.
BenchmarkReport benchmark(const ExperimentConfig& cfg, const TrialDataset& ds, std::size_t repeats);

FootprintParams footprint_params(const ExperimentConfig& cfg, std::size_t n_channels, std::size_t n_classes);

}  // namespace hdemb
