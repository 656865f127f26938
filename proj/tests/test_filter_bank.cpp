#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "hdemb/errors.hpp"
#include "hdemb/filter_bank.hpp"
#include "hdemb/rng.hpp"

namespace hdemb {
namespace {

using cd = std::complex<double>;

// Second-order Butterworth low-pass prototype moved to band-pass with
// pre-warped edges, evaluated on the unit circle through s = 2 fs tan(w/2) j.
double analog_oracle_gain(double low, double high, double fs, double f) {
  const double wl = 2.0 * fs * std::tan(std::numbers::pi * low / fs);
  const double wh = 2.0 * fs * std::tan(std::numbers::pi * high / fs);
  const double w0sq = wl * wh;
  const double bw = wh - wl;
  const cd s(0.0, 2.0 * fs * std::tan(std::numbers::pi * f / fs));
  const cd p = (s * s + w0sq) / (s * bw);
  return std::abs(1.0 / (p * p + std::sqrt(2.0) * p + 1.0));
}

Eigen::MatrixXd sine(double f, double fs, std::size_t n, double phase = 0.0) {
  Eigen::MatrixXd x(1, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    x(0, static_cast<Eigen::Index>(i)) = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs + phase);
  }
  return x;
}

double tail_peak(const Eigen::MatrixXd& y, std::size_t skip) {
  return y.rightCols(y.cols() - static_cast<Eigen::Index>(skip)).cwiseAbs().maxCoeff();
}

TEST(DesignBandpass, SectionCountAndValidation) {
  const auto f = design_bandpass(8.0, 12.0, 128.0);
  EXPECT_EQ(f.sections.size(), static_cast<std::size_t>(kPrototypeOrder));
  EXPECT_THROW(design_bandpass(12.0, 8.0, 128.0), InvalidArgument);
  EXPECT_THROW(design_bandpass(10.0, 10.0, 128.0), InvalidArgument);
  EXPECT_THROW(design_bandpass(0.0, 10.0, 128.0), InvalidArgument);
  EXPECT_THROW(design_bandpass(30.0, 64.0, 128.0), InvalidArgument);
}

TEST(DesignBandpass, ResponseMatchesAnalogOracle) {
  for (const auto& [lo, hi, fs] : {std::tuple{8.0, 12.0, 128.0}, {4.0, 6.0, 250.0}, {20.0, 36.0, 250.0}, {1.0, 60.0, 128.0}}) {
    const auto filt = design_bandpass(lo, hi, fs);
    for (double f = 0.25; f < fs / 2.0; f += 0.37) {
      EXPECT_NEAR(std::abs(filt.response(f)), analog_oracle_gain(lo, hi, fs, f), 1e-9) << lo << "-" << hi << " @" << f;
    }
    EXPECT_NEAR(std::abs(filt.response(lo)), 1.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(std::abs(filt.response(hi)), 1.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(std::abs(filt.response(filt.center_frequency())), 1.0, 1e-9);
  }
}

TEST(DesignBandpass, GeometricCenterWithin3dB) {
  for (double lo = 4.0; lo < 28.0; lo += 2.0) {
    const auto filt = design_bandpass(lo, lo + 2.0, 250.0);
    const double fc = std::sqrt(lo * (lo + 2.0));
    const auto y = filter_rows(filt, sine(fc, 250.0, 20000));
    EXPECT_GE(tail_peak(y, 10000), 1.0 / std::sqrt(2.0));
    EXPECT_LE(tail_peak(y, 10000), 1.0 + 1e-6);
  }
}

TEST(DesignBandpass, SimulatedAmplitudeMatchesResponse) {
  const auto filt = design_bandpass(8.0, 12.0, 128.0);
  for (double f : {3.0, 9.0, 10.0, 13.0, 25.0}) {
    const auto y = filter_rows(filt, sine(f, 128.0, 30000));
    EXPECT_NEAR(tail_peak(y, 20000), std::abs(filt.response(f)), 2e-3) << f;
  }
}

TEST(FilterRows, RejectsDc) {
  for (const auto& band : default_bands(DatasetKind::three_class).bands) {
    const auto filt = design_bandpass(band.low, band.high, 250.0);
    const auto y = filter_rows(filt, Eigen::MatrixXd::Ones(1, 20000));
    EXPECT_LT(std::abs(y(0, y.cols() - 1)), 1e-3);
  }
}

TEST(FilterRows, ZeroInLinearAndShapePreserving) {
  const auto filt = design_bandpass(8.0, 12.0, 128.0);
  EXPECT_EQ(filter_rows(filt, Eigen::MatrixXd::Zero(3, 100)), Eigen::MatrixXd::Zero(3, 100));
  Rng rng(RngSeed{1});
  Eigen::MatrixXd x(3, 500), y(3, 500);
  for (auto& v : x.reshaped()) v = rng.normal();
  for (auto& v : y.reshaped()) v = rng.normal();
  const double a = 2.5, b = -0.75;
  const Eigen::MatrixXd lhs = filter_rows(filt, a * x + b * y);
  const Eigen::MatrixXd rhs = a * filter_rows(filt, x) + b * filter_rows(filt, y);
  EXPECT_EQ(lhs.rows(), 3);
  EXPECT_EQ(lhs.cols(), 500);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FilterRows, Causal) {
  const auto filt = design_bandpass(8.0, 12.0, 128.0);
  Rng rng(RngSeed{2});
  Eigen::MatrixXd x(1, 400);
  for (auto& v : x.reshaped()) v = rng.normal();
  Eigen::MatrixXd x2 = x;
  x2.rightCols(200).setZero();
  EXPECT_EQ(filter_rows(filt, x).leftCols(200), filter_rows(filt, x2).leftCols(200));
}

TEST(ApplyFilterbank, TenHzSeparation) {
  TrialTensor trial{sine(10.0, 128.0, 4096), 128.0};
  FilterBankConfig cfg{{{8.0, 12.0}, {26.0, 30.0}}};
  const auto out = apply_filterbank(trial, cfg);
  ASSERT_EQ(out.size(), 2U);
  const auto energy = [](const TrialTensor& t) { return t.samples.rightCols(2048).squaredNorm(); };
  const double input = trial.samples.rightCols(2048).squaredNorm();
  EXPECT_GT(energy(out[0]) / input, 0.5);
  EXPECT_LT(10.0 * std::log10(energy(out[1]) / input), -20.0);
  EXPECT_EQ(out[0].fs, 128.0);
}

TEST(FilterBankConfig, Validation) {
  EXPECT_THROW(FilterBankConfig{}.validate(128.0), InvalidArgument);
  EXPECT_THROW((FilterBankConfig{{{8.0, 70.0}}}).validate(128.0), InvalidArgument);
  EXPECT_NO_THROW((FilterBankConfig{{{8.0, 12.0}}}).validate(128.0));
}

TEST(DefaultBands, ThreeClassFamily) {
  const auto cfg = default_bands(DatasetKind::three_class);
  ASSERT_EQ(cfg.bands.size(), 13U);
  EXPECT_EQ(cfg.bands.front(), (Band{4.0, 6.0}));
  EXPECT_EQ(cfg.bands.back(), (Band{28.0, 30.0}));
  for (std::size_t i = 1; i < cfg.bands.size(); ++i) EXPECT_EQ(cfg.bands[i].low, cfg.bands[i - 1].high);
}

TEST(DefaultBands, FourClassFamily) {
  const auto a = default_bands(DatasetKind::four_class);
  const auto b = default_bands(DatasetKind::four_class);
  EXPECT_EQ(a.bands, b.bands);
  EXPECT_GT(a.bands.size(), 13U);
  for (const auto& band : a.bands) {
    EXPECT_GE(band.low, 4.0);
    EXPECT_LT(band.low, band.high);
    EXPECT_LE(band.high, 40.0);
  }
  EXPECT_NO_THROW(a.validate(250.0));
  EXPECT_EQ(parse_dataset_kind(to_string(DatasetKind::four_class)), DatasetKind::four_class);
  EXPECT_THROW(parse_dataset_kind("5class"), InvalidArgument);
}

}  // namespace
}  // namespace hdemb
