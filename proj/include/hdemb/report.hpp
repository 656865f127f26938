#pragma once

// Metrics, memory footprint model and run reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdemb/config.hpp"
#include "hdemb/encoder.hpp"

namespace hdemb {

/// 100 * correct / total. Throws InvalidArgument on empty or unequal input.
double accuracy(std::span<const int> predictions, std::span<const int> labels);

/// rows: true class, columns: predicted class (both 1-based, stored 0-based).
Eigen::MatrixXi confusion_matrix(std::span<const int> predictions, std::span<const int> labels,
                                 std::size_t n_classes);

struct FootprintParams {
  EmbeddingKind kind = EmbeddingKind::thermometer;
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  std::size_t n_features = 0;  // n_R
  std::size_t n_bands = 0;
  std::size_t prototypes_per_class = 1;
};

struct Footprint {
  std::uint64_t associative_memory = 0;  // n_cl * k * d
  std::uint64_t encoder = 0;             // d
  std::uint64_t embedding = 0;           // 0, 2 n_R d or 8 n_R d
  std::uint64_t svm_reference = 0;       // 64 n_cl n_R n_b, for comparison only

  std::uint64_t total() const noexcept { return associative_memory + encoder + embedding; }
};

Footprint footprint_bits(const FootprintParams& p);

struct StageTimes {
  double fit_features = 0.0;     // seconds
  double train_embedding = 0.0;  // seconds
  double train_am = 0.0;         // seconds
  double inference_per_trial = 0.0;
};

struct FoldResult {
  std::vector<std::size_t> test_indices;
  std::vector<int> predictions;
  std::vector<int> labels;
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;
  Eigen::MatrixXd prototype_similarity;
  StageTimes times;
};

struct RunReport {
  ConfigMap config;  // fully resolved
  std::vector<Band> bands;
  std::size_t n_classes = 0;
  std::size_t n_channels = 0;
  std::size_t n_features = 0;
  std::size_t dim = 0;
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  Eigen::MatrixXi confusion;
  Footprint footprint;
};

/// Everything except timings, as deterministic JSON.
std::string report_json(const RunReport& report);
std::string timings_json(const RunReport& report);
std::string report_summary(const RunReport& report);

/// report.json, timings.json and summary.txt under `dir`.
void write_report(const RunReport& report, const std::filesystem::path& dir);

struct TimingRow {
  std::string stage;
  double mean_us = 0.0;  // per trial
  double std_us = 0.0;
};

struct BenchmarkReport {
  ConfigMap config;
  std::size_t repeats = 0;
  std::size_t train_trials = 0;
  std::size_t test_trials = 0;
  std::vector<TimingRow> rows;
};

std::string benchmark_json(const BenchmarkReport& report);
std::string benchmark_summary(const BenchmarkReport& report);

std::string footprint_json(const FootprintParams& params, const Footprint& footprint);
std::string footprint_summary(const FootprintParams& params, const Footprint& footprint);

/// Sample mean and population standard deviation (0 for a single value).
std::pair<double, double> mean_std(std::span<const double> values);

}  // namespace hdemb
