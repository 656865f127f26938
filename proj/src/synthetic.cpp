#include "hdemb/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "hdemb/errors.hpp"
#include "hdemb/parallel.hpp"

namespace hdemb {

void SynthSpec::validate() const {
  if (n_classes == 0 || n_channels < 2 || n_samples < 2 || n_sessions == 0 || trials_per_session == 0) {
    throw InvalidArgument("synth: need n_classes >= 1, n_channels >= 2, n_samples >= 2 and at least one trial");
  }
  if (!(fs > 0.0)) throw InvalidArgument("synth: fs must be positive");
  if (bands.empty()) throw InvalidArgument("synth: no bands");
  for (const auto& b : bands) {
    if (!(b.low > 0.0 && b.low <= b.high && b.high < fs / 2.0)) throw InvalidArgument("synth: band outside (0, fs/2)");
  }
  if (amplitude.size() != n_classes * n_channels * bands.size()) {
    throw InvalidArgument("synth: amplitude profile has " + std::to_string(amplitude.size()) + " entries, expected " +
                          std::to_string(n_classes * n_channels * bands.size()));
  }
  for (double a : amplitude) {
    if (!(a >= 0.0)) throw InvalidArgument("synth: amplitudes must be non-negative");
  }
  if (!(noise_sigma >= 0.0) || !(amplitude_jitter >= 0.0)) throw InvalidArgument("synth: noise must be non-negative");
}

SynthSpec separable_spec(std::size_t n_classes, std::size_t n_channels, std::vector<Band> bands, double baseline,
                         double boost, std::size_t active_channels) {
  SynthSpec spec;
  spec.n_classes = n_classes;
  spec.n_channels = n_channels;
  spec.bands = std::move(bands);
  spec.amplitude.assign(n_classes * n_channels * spec.bands.size(), baseline);
  for (std::size_t c = 0; c < n_classes; ++c) {
    const std::size_t band = c % spec.bands.size();
    for (std::size_t k = 0; k < active_channels; ++k) {
      spec.amplitude_at(c, (c * active_channels + k) % n_channels, band) += boost;
    }
  }
  return spec;
}

TrialDataset generate_synthetic(const SynthSpec& spec, std::size_t threads) {
  spec.validate();
  const std::size_t n_trials = spec.n_sessions * spec.trials_per_session;
  TrialDataset ds;
  ds.fs = static_cast<double>(static_cast<float>(spec.fs));
  ds.n_classes = spec.n_classes;
  ds.trials.resize(n_trials);
  ds.labels.resize(n_trials);
  ds.sessions.resize(n_trials);
  parallel_for(n_trials, threads, [&](std::size_t t) {
    const auto label = static_cast<std::size_t>(t % spec.n_classes);
    ds.labels[t] = static_cast<int>(label) + 1;
    ds.sessions[t] = static_cast<std::uint16_t>(t / spec.trials_per_session);
    Rng rng(derive_seed(spec.seed, stream::kSynthetic, t));
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.n_channels),
                                              static_cast<Eigen::Index>(spec.n_samples));
    // One source per band: frequency and phase are shared by all channels,
    // the amplitude profile is its spatial pattern.
    for (std::size_t b = 0; b < spec.bands.size(); ++b) {
      const double f = rng.uniform(spec.bands[b].low, spec.bands[b].high);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      Eigen::RowVectorXd wave(static_cast<Eigen::Index>(spec.n_samples));
      for (std::size_t n = 0; n < spec.n_samples; ++n) {
        wave[static_cast<Eigen::Index>(n)] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(n) / spec.fs + phase);
      }
      for (std::size_t ch = 0; ch < spec.n_channels; ++ch) {
        double a = spec.amplitude_at(label, ch, b);
        if (a <= 0.0) continue;
        if (spec.amplitude_jitter > 0.0) a *= std::max(0.0, 1.0 + spec.amplitude_jitter * rng.normal());
        x.row(static_cast<Eigen::Index>(ch)) += a * wave;
      }
    }
    if (spec.noise_sigma > 0.0) {
      for (Eigen::Index ch = 0; ch < x.rows(); ++ch) {
        for (Eigen::Index n = 0; n < x.cols(); ++n) x(ch, n) += spec.noise_sigma * rng.normal();
      }
    }
    ds.trials[t] = TrialTensor{x.unaryExpr([](double v) { return static_cast<double>(static_cast<float>(v)); }), ds.fs};
  });
  return ds;
}

}  // namespace hdemb
