#pragma once

// Trial datasets: the HDBC binary container, a CSV importer and
// cross-validation folds.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hdemb/rng.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

struct TrialDataset {
  std::vector<TrialTensor> trials;
  std::vector<int> labels;               // 1..n_classes
  std::vector<std::uint16_t> sessions;   // session id per trial
  double fs = 0.0;
  std::size_t n_classes = 0;

  std::size_t size() const noexcept { return trials.size(); }
  std::size_t channels() const noexcept { return trials.empty() ? 0 : trials.front().channels(); }
  std::size_t length() const noexcept { return trials.empty() ? 0 : trials.front().length(); }

  /// Throws DataError on inconsistent shapes or rates and LabelError on a
  /// label outside 1..n_classes.
  void validate() const;

  TrialDataset subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const TrialDataset&, const TrialDataset&) = default;
};

/// Layout (little-endian): "HDBC" | u16 version | u32 n_trials | u16 n_ch |
/// u32 n_s | f32 fs | u16 n_cl | per trial: u16 session, u16 label,
/// n_ch * n_s f32 samples, channel-major. Samples are stored as f32.
void save_dataset(const TrialDataset& ds, const std::filesystem::path& path);
TrialDataset load_dataset(const std::filesystem::path& path);

/// Manifest CSV with header `file,label,session`; each trial file is a CSV
/// with a header of channel names and one row per sample. Relative trial
/// paths resolve against the manifest's directory. n_classes is the largest
/// label seen.
TrialDataset import_csv(const std::filesystem::path& manifest, double fs);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// by_session: each distinct session is a test unit, distributed round-robin
/// over n_folds (n_folds == number of sessions gives leave-one-session-out).
/// Otherwise stratified random folds: every class is shuffled and dealt out.
/// Folds partition {0..n-1}; indices within a fold are ascending.
std::vector<Fold> make_folds(const TrialDataset& ds, std::size_t n_folds, bool by_session, RngSeed seed);

}  // namespace hdemb
