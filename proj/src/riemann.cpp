#include "hdemb/riemann.hpp"

#include <Eigen/Eigenvalues>

#include "binary_io.hpp"
#include "hdemb/errors.hpp"
#include "hdemb/parallel.hpp"

namespace hdemb {

Eigen::MatrixXd estimate_covariance(const Eigen::MatrixXd& x, double alpha) {
  if (x.cols() < 2) throw InvalidArgument("estimate_covariance: need at least 2 samples");
  Eigen::MatrixXd c = x * x.transpose();
  c.diagonal().array() += alpha;
  return c / static_cast<double>(x.cols() - 1);
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("symmetric_eigen: matrix is not square");
  const Eigen::MatrixXd sym = (m + m.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) {
    throw NumericError("symmetric eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  const auto e = symmetric_eigen(m);
  return e.values.size() > 0 && e.values.minCoeff() > 0.0;
}

Eigen::MatrixXd fit_reference(std::span<const Eigen::MatrixXd> covariances) {
  if (covariances.empty()) throw InvalidArgument("fit_reference: no covariance matrices");
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(covariances.front().rows(), covariances.front().cols());
  for (const auto& c : covariances) {
    if (c.rows() != mean.rows() || c.cols() != mean.cols()) throw InvalidArgument("fit_reference: shape mismatch");
    mean += c;
  }
  mean /= static_cast<double>(covariances.size());
  const auto e = symmetric_eigen(mean);
  if (!(e.values.minCoeff() > 0.0)) {
    throw NumericError("fit_reference: mean covariance is not positive definite (min eigenvalue " +
                       std::to_string(e.values.minCoeff()) + ")");
  }
  return spectral_apply(e, [](double v) { return 1.0 / std::sqrt(v); });
}

Eigen::MatrixXd half_unvectorize(const FeatureVector& f) {
  const auto n = static_cast<Eigen::Index>((std::sqrt(8.0 * static_cast<double>(f.size()) + 1.0) - 1.0) / 2.0 + 0.5);
  if (n * (n + 1) / 2 != f.size()) throw InvalidArgument("half_unvectorize: length is not triangular");
  Eigen::MatrixXd m(n, n);
  const double root2 = std::sqrt(2.0);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = f[k++];
    for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = f[k++] / root2;
  }
  return m;
}

FeatureVector riemann_features(const Eigen::MatrixXd& covariance, const Eigen::MatrixXd& whitener) {
  if (covariance.rows() != whitener.rows() || covariance.cols() != whitener.cols() ||
      covariance.rows() != covariance.cols()) {
    throw InvalidArgument("riemann_features: shape mismatch");
  }
  const auto e = symmetric_eigen(whitener * covariance * whitener);
  if (!(e.values.minCoeff() > 0.0)) {
    throw NumericError("riemann_features: whitened covariance is not positive definite (min eigenvalue " +
                       std::to_string(e.values.minCoeff()) + ")");
  }
  return half_vectorize(spectral_apply(e, [](double v) { return std::log(v); }));
}

Standardization fit_standardization(std::span<const FeatureVector> train) {
  if (train.size() < 2) throw InvalidArgument("fit_standardization: need at least 2 vectors");
  const auto n = train.front().size();
  Standardization s{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (const auto& f : train) {
    if (f.size() != n) throw InvalidArgument("fit_standardization: length mismatch");
    s.mean += f;
  }
  s.mean /= static_cast<double>(train.size());
  for (const auto& f : train) s.stddev.array() += (f - s.mean).array().square();
  s.stddev = (s.stddev / static_cast<double>(train.size())).cwiseSqrt();
  return s;
}

FeatureVector apply_standardization(const FeatureVector& f, const Standardization& stats) {
  if (f.size() != stats.mean.size()) throw InvalidArgument("apply_standardization: length mismatch");
  FeatureVector out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    out[i] = stats.stddev[i] > 0.0 ? (f[i] - stats.mean[i]) / stats.stddev[i] : 0.0;
  }
  return out;
}

std::vector<Eigen::MatrixXd> band_covariances(const TrialTensor& trial, const std::vector<FilterCoefficients>& filters,
                                              double alpha) {
  std::vector<Eigen::MatrixXd> covs;
  covs.reserve(filters.size());
  for (const auto& band : apply_filterbank(trial, filters)) covs.push_back(estimate_covariance(band.samples, alpha));
  return covs;
}

RiemannState fit_riemann(std::span<const TrialTensor> train, const RiemannConfig& cfg, std::size_t threads) {
  if (train.size() < 2) throw InvalidArgument("fit_riemann: need at least 2 training trials");
  const double fs = train.front().fs;
  const auto filters = design_filterbank(cfg.filter_bank, fs);
  const std::size_t n_bands = filters.size();

  std::vector<std::vector<Eigen::MatrixXd>> covs(train.size());
  parallel_for(train.size(), threads, [&](std::size_t t) {
    if (train[t].fs != fs || train[t].channels() != train.front().channels()) {
      throw InvalidArgument("fit_riemann: trials differ in sampling rate or channel count");
    }
    covs[t] = band_covariances(train[t], filters, cfg.alpha);
  });

  RiemannState state;
  state.alpha = cfg.alpha;
  state.fs = fs;
  state.bands = cfg.filter_bank.bands;
  for (std::size_t b = 0; b < n_bands; ++b) {
    std::vector<Eigen::MatrixXd> band(train.size());
    for (std::size_t t = 0; t < train.size(); ++t) band[t] = covs[t][b];
    state.whiteners.push_back(fit_reference(band));
    std::vector<FeatureVector> raw(train.size());
    for (std::size_t t = 0; t < train.size(); ++t) raw[t] = riemann_features(band[t], state.whiteners.back());
    state.stats.push_back(fit_standardization(raw));
  }
  return state;
}

BandedFeatures transform_trial(const RiemannState& state, const std::vector<FilterCoefficients>& filters,
                               const TrialTensor& trial) {
  if (filters.size() != state.n_bands()) throw InvalidArgument("transform_trial: band count mismatch");
  const auto covs = band_covariances(trial, filters, state.alpha);
  BandedFeatures out(static_cast<Eigen::Index>(riemann_feature_count(trial.channels())),
                     static_cast<Eigen::Index>(state.n_bands()));
  for (std::size_t b = 0; b < state.n_bands(); ++b) {
    out.col(static_cast<Eigen::Index>(b)) =
        apply_standardization(riemann_features(covs[b], state.whiteners[b]), state.stats[b]);
  }
  return out;
}

std::vector<BandedFeatures> transform_trials(const RiemannState& state, std::span<const TrialTensor> trials,
                                             std::size_t threads) {
  std::vector<BandedFeatures> out(trials.size());
  if (trials.empty()) return out;
  const auto filters = design_filterbank(FilterBankConfig{state.bands}, trials.front().fs);
  parallel_for(trials.size(), threads, [&](std::size_t t) { out[t] = transform_trial(state, filters, trials[t]); });
  return out;
}

namespace {
constexpr char kRiemannMagic[5] = "HDRS";
constexpr std::uint16_t kRiemannVersion = 1;
}  // namespace

void save_riemann_state(const RiemannState& state, const std::filesystem::path& path) {
  io::Writer out;
  io::put_header(out, kRiemannMagic, kRiemannVersion);
  out.put<double>(state.alpha);
  out.put<double>(state.fs);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(state.n_bands()));
  const auto n_ch = state.whiteners.empty() ? 0 : state.whiteners.front().rows();
  out.put<std::uint32_t>(static_cast<std::uint32_t>(n_ch));
  for (std::size_t b = 0; b < state.n_bands(); ++b) {
    out.put<double>(state.bands[b].low);
    out.put<double>(state.bands[b].high);
    const auto& w = state.whiteners[b];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) out.put<double>(w(i, j));
    }
    for (Eigen::Index i = 0; i < state.stats[b].mean.size(); ++i) {
      out.put<double>(state.stats[b].mean[i]);
      out.put<double>(state.stats[b].stddev[i]);
    }
  }
  out.write_file(path);
}

RiemannState load_riemann_state(const std::filesystem::path& path) {
  auto in = io::Reader::from_file(path);
  io::expect_header(in, kRiemannMagic, kRiemannVersion);
  RiemannState state;
  state.alpha = in.get<double>("alpha");
  state.fs = in.get<double>("sampling rate");
  const auto n_bands = in.get<std::uint32_t>("band count");
  const auto n_ch = static_cast<Eigen::Index>(in.get<std::uint32_t>("channel count"));
  const auto n_r = static_cast<Eigen::Index>(riemann_feature_count(static_cast<std::size_t>(n_ch)));
  for (std::uint32_t b = 0; b < n_bands; ++b) {
    Band band;
    band.low = in.get<double>("band");
    band.high = in.get<double>("band");
    state.bands.push_back(band);
    Eigen::MatrixXd w(n_ch, n_ch);
    for (Eigen::Index i = 0; i < n_ch; ++i) {
      for (Eigen::Index j = 0; j < n_ch; ++j) w(i, j) = in.get<double>("whitener");
    }
    state.whiteners.push_back(std::move(w));
    Standardization s{Eigen::VectorXd(n_r), Eigen::VectorXd(n_r)};
    for (Eigen::Index i = 0; i < n_r; ++i) {
      s.mean[i] = in.get<double>("feature stats");
      s.stddev[i] = in.get<double>("feature stats");
    }
    state.stats.push_back(std::move(s));
  }
  return state;
}

}  // namespace hdemb
