#pragma once

// Synthetic multichannel trials with class-specific band-limited spatial
// covariance. Every band carries one sinusoidal source per trial with a
// random phase and a frequency drawn uniformly inside the band; channel ch
// receives it scaled by amplitude[class][ch][band] (optionally jittered),
// and white Gaussian noise is added on top.

#include <cstddef>
#include <vector>

#include "hdemb/dataset.hpp"
#include "hdemb/filter_bank.hpp"

namespace hdemb {

struct SynthSpec {
  std::size_t n_classes = 3;
  std::size_t n_channels = 16;
  std::size_t n_samples = 256;
  double fs = 128.0;
  std::size_t n_sessions = 4;
  std::size_t trials_per_session = 24;  // labels cycle 1..n_classes
  std::vector<Band> bands;
  std::vector<double> amplitude;        // [class][channel][band], flattened
  double amplitude_jitter = 0.0;        // relative per-trial standard deviation
  double noise_sigma = 0.0;
  RngSeed seed{};

  double& amplitude_at(std::size_t cls, std::size_t ch, std::size_t band) {
    return amplitude[(cls * n_channels + ch) * bands.size() + band];
  }
  double amplitude_at(std::size_t cls, std::size_t ch, std::size_t band) const {
    return amplitude[(cls * n_channels + ch) * bands.size() + band];
  }

  /// Throws InvalidArgument on negative amplitudes or noise, bands outside
  /// (0, fs/2), or a profile of the wrong size.
  void validate() const;
};

/// Every class gets a baseline amplitude on all channels in all of the
/// `bands`, plus `boost` in band (class index mod n_bands) on its own block of
/// `active_channels` channels.
SynthSpec separable_spec(std::size_t n_classes, std::size_t n_channels, std::vector<Band> bands, double baseline,
                         double boost, std::size_t active_channels);

/// Deterministic from spec.seed; trial t uses its own derived stream.
/// Samples are rounded to f32 so the dataset round-trips exactly.
TrialDataset generate_synthetic(const SynthSpec& spec, std::size_t threads = 1);

}  // namespace hdemb
