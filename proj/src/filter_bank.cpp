#include "hdemb/filter_bank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hdemb/errors.hpp"

namespace hdemb {

namespace {

using Complex = std::complex<double>;

Complex bilinear(Complex s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

double prewarp(double hz, double fs) { return 2.0 * fs * std::tan(std::numbers::pi * hz / fs); }

}  // namespace

void FilterBankConfig::validate(double fs) const {
  if (bands.empty()) throw InvalidArgument("filter bank: no bands");
  for (const auto& b : bands) {
    if (!(b.low > 0.0 && b.low < b.high && b.high < fs / 2.0)) {
      throw InvalidArgument("filter bank: band [" + std::to_string(b.low) + ", " + std::to_string(b.high) +
                            "] invalid for fs " + std::to_string(fs));
    }
  }
}

double FilterCoefficients::center_frequency() const {
  const double w0 = std::sqrt(prewarp(band.low, fs) * prewarp(band.high, fs));
  return fs / std::numbers::pi * std::atan(w0 / (2.0 * fs));
}

std::complex<double> FilterCoefficients::response(double frequency_hz) const {
  const Complex z1 = std::polar(1.0, -2.0 * std::numbers::pi * frequency_hz / fs);
  const Complex z2 = z1 * z1;
  Complex h{1.0, 0.0};
  for (const auto& s : sections) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  return h;
}

FilterCoefficients design_bandpass(double low, double high, double fs) {
  if (!(fs > 0.0)) throw InvalidArgument("design_bandpass: fs must be positive");
  if (!(low > 0.0 && low < high && high < fs / 2.0)) {
    throw InvalidArgument("design_bandpass: need 0 < low < high < fs/2, got [" + std::to_string(low) + ", " +
                          std::to_string(high) + "] at fs " + std::to_string(fs));
  }
  const double w1 = prewarp(low, fs);
  const double w2 = prewarp(high, fs);
  const double w0 = std::sqrt(w1 * w2);
  const double bw = w2 - w1;

  FilterCoefficients out{{low, high}, fs, {}};
  // Upper-half-plane prototype poles; each yields two band-pass poles whose
  // conjugates come from the mirrored prototype pole.
  for (int k = 0; k < kPrototypeOrder / 2; ++k) {
    const Complex p = std::polar(1.0, std::numbers::pi * (2.0 * k + kPrototypeOrder + 1) / (2.0 * kPrototypeOrder));
    const Complex half = p * bw / 2.0;
    const Complex root = std::sqrt(half * half - w0 * w0);
    for (const Complex s : {half + root, half - root}) {
      const Complex z = bilinear(s, fs);
      // Zeros at z = +1 (s = 0) and z = -1 (s = infinity).
      out.sections.push_back(Biquad{1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    }
  }
  const double gain = std::abs(out.response(out.center_frequency()));
  const double per_section = std::pow(gain, -1.0 / static_cast<double>(out.sections.size()));
  for (auto& s : out.sections) {
    s.b0 *= per_section;
    s.b1 *= per_section;
    s.b2 *= per_section;
  }
  return out;
}

Eigen::MatrixXd filter_rows(const FilterCoefficients& filter, const Eigen::MatrixXd& samples) {
  Eigen::MatrixXd y = samples;
  for (const auto& s : filter.sections) {
    for (Eigen::Index row = 0; row < y.rows(); ++row) {
      double w1 = 0.0;
      double w2 = 0.0;
      for (Eigen::Index n = 0; n < y.cols(); ++n) {
        const double x = y(row, n);
        const double out = s.b0 * x + w1;
        w1 = s.b1 * x - s.a1 * out + w2;
        w2 = s.b2 * x - s.a2 * out;
        y(row, n) = out;
      }
    }
  }
  return y;
}

std::vector<FilterCoefficients> design_filterbank(const FilterBankConfig& cfg, double fs) {
  cfg.validate(fs);
  std::vector<FilterCoefficients> filters;
  filters.reserve(cfg.bands.size());
  for (const auto& b : cfg.bands) filters.push_back(design_bandpass(b.low, b.high, fs));
  return filters;
}

std::vector<TrialTensor> apply_filterbank(const TrialTensor& trial, const std::vector<FilterCoefficients>& filters) {
  std::vector<TrialTensor> out;
  out.reserve(filters.size());
  for (const auto& f : filters) {
    if (f.fs != trial.fs) throw InvalidArgument("apply_filterbank: filter designed for a different sampling rate");
    out.push_back(TrialTensor{filter_rows(f, trial.samples), trial.fs});
  }
  return out;
}

std::vector<TrialTensor> apply_filterbank(const TrialTensor& trial, const FilterBankConfig& cfg) {
  return apply_filterbank(trial, design_filterbank(cfg, trial.fs));
}

FilterBankConfig default_bands(DatasetKind kind) {
  FilterBankConfig cfg;
  if (kind == DatasetKind::three_class) {
    for (int low = 4; low < 30; low += 2) cfg.bands.push_back({static_cast<double>(low), static_cast<double>(low + 2)});
    return cfg;
  }
  constexpr double kLow = 4.0;
  constexpr double kHigh = 40.0;
  for (const double width : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    for (double low = kLow; low + width / 2.0 < kHigh; low += width / 2.0) {
      const Band b{low, std::min(low + width, kHigh)};
      if (std::find(cfg.bands.begin(), cfg.bands.end(), b) == cfg.bands.end()) cfg.bands.push_back(b);
    }
  }
  return cfg;
}

std::string to_string(DatasetKind kind) { return kind == DatasetKind::three_class ? "3class" : "4class"; }

DatasetKind parse_dataset_kind(const std::string& name) {
  if (name == "3class") return DatasetKind::three_class;
  if (name == "4class") return DatasetKind::four_class;
  throw InvalidArgument("unknown band family '" + name + "' (expected 3class or 4class)");
}

}  // namespace hdemb
