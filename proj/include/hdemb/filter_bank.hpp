#pragma once

// Butterworth band-pass filter bank: analog prototype, low-pass to band-pass
// transform, bilinear transform with pre-warped band edges, cascaded biquads
// in transposed direct form II.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "hdemb/types.hpp"

namespace hdemb {

struct Band {
  double low = 0.0;
  double high = 0.0;

  friend bool operator==(const Band&, const Band&) = default;
};

struct FilterBankConfig {
  std::vector<Band> bands;

  /// Throws InvalidArgument unless bands is non-empty and 0 < low < high < fs/2.
  void validate(double fs) const;
};

/// y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

struct FilterCoefficients {
  Band band;
  double fs = 0.0;
  std::vector<Biquad> sections;

  /// Digital frequency the analog center maps to; the gain there is 1.
  double center_frequency() const;

  std::complex<double> response(double frequency_hz) const;
};

/// Order of the analog low-pass prototype; the band-pass has twice this.
inline constexpr int kPrototypeOrder = 2;

FilterCoefficients design_bandpass(double low, double high, double fs);

/// Causal filtering along each row of `samples`.
Eigen::MatrixXd filter_rows(const FilterCoefficients& filter, const Eigen::MatrixXd& samples);

std::vector<TrialTensor> apply_filterbank(const TrialTensor& trial, const std::vector<FilterCoefficients>& filters);
std::vector<TrialTensor> apply_filterbank(const TrialTensor& trial, const FilterBankConfig& cfg);

std::vector<FilterCoefficients> design_filterbank(const FilterBankConfig& cfg, double fs);

enum class DatasetKind { three_class, four_class };

/// three_class: 13 contiguous 2 Hz bands over 4-30 Hz.
/// four_class: widths 2, 4, 8, 16 and 32 Hz with 50% overlap, clipped to 4-40 Hz.
FilterBankConfig default_bands(DatasetKind kind);

std::string to_string(DatasetKind kind);
DatasetKind parse_dataset_kind(const std::string& name);

}  // namespace hdemb
