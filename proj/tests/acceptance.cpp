// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdemb/associative_memory.hpp"
#include "hdemb/config.hpp"
#include "hdemb/encoder.hpp"
#include "hdemb/experiment.hpp"
#include "hdemb/item_memory.hpp"
#include "hdemb/learned_projection.hpp"
#include "hdemb/quantize.hpp"
#include "hdemb/random_projection.hpp"
#include "hdemb/report.hpp"
#include "hdemb/riemann.hpp"

namespace {

using namespace hdemb;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first few failures and a free-form summary.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) failed_ += (failed_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    std::string d = notes_;
    if (failures_ > 0) d += (d.empty() ? "" : "; ") + std::to_string(failures_) + " failure(s): " + failed_;
    return {failures_ == 0, d};
  }

 private:
  std::size_t failures_ = 0;
  std::string failed_;
  std::string notes_;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

Hypervector flip_exactly(const Hypervector& v, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(v.dim());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Hypervector out = v;
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
    out.set(idx[i], !v[idx[i]]);
  }
  return out;
}

Hypervector flip_fraction(const Hypervector& v, double p, Rng& rng) {
  Hypervector out = v;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (rng.uniform() < p) out.set(i, !v[i]);
  }
  return out;
}

Outcome hypervector_algebra() {
  Check c;
  Rng rng(RngSeed{101});
  const std::size_t d = 10000;
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_hv(d, rng);
    const auto b = random_hv(d, rng);
    const auto k = random_hv(d, rng);
    const auto shift = static_cast<std::int64_t>(rng.below(2 * d)) - static_cast<std::int64_t>(d);
    c.expect(hamming_count(bind(a, k), bind(b, k)) == hamming_count(a, b), "xor isometry");
    c.expect(hamming_count(permute(a, shift), permute(b, shift)) == hamming_count(a, b), "permutation isometry");
    c.expect(bind(bind(a, b), b) == a, "self-inverse binding");
  }
  double sum = 0.0;
  for (int t = 0; t < 1000; ++t) sum += hamming(random_hv(d, rng), random_hv(d, rng));
  const double mean = sum / 1000.0;
  c.expect(std::abs(mean - 0.5) <= 0.005, "random-pair mean " + fmt(mean));
  c.note("3x1000 exact cases, random-pair mean " + fmt(mean, 5));
  return c.outcome();
}

Outcome robust_retrieval() {
  Check c;
  const std::size_t d = 10000;
  const auto im = ItemMemory::random(100, d, RngSeed{202});
  Rng rng(RngSeed{203});
  std::size_t correct = 0;
  for (std::size_t q = 0; q < 100; ++q) {
    const auto query = flip_exactly(im[q], d / 3, rng);
    c.expect(hamming_count(query, im[q]) == d / 3, "flip count");
    correct += im.nearest(query).index == q ? 1 : 0;
  }
  c.expect(correct == 100, "retrieved " + std::to_string(correct) + "/100");
  c.note(std::to_string(correct) + "/100 queries with " + std::to_string(d / 3) + " flipped bits");
  return c.outcome();
}

Outcome record_decode() {
  Check c;
  const std::size_t d = 10000;
  const auto keys = ItemMemory::random(3, d, RngSeed{301});
  const auto values = ItemMemory::random(26, d, RngSeed{302});
  Rng rng(RngSeed{303});
  std::size_t ok_records = 0;
  for (int r = 0; r < 100; ++r) {
    std::vector<std::size_t> chosen;
    std::vector<std::pair<Hypervector, Hypervector>> pairs;
    for (std::size_t f = 0; f < 3; ++f) {
      chosen.push_back(static_cast<std::size_t>(rng.below(26)));
      pairs.emplace_back(keys[f], values[chosen.back()]);
    }
    const auto record = encode_record(pairs, rng);
    bool all = true;
    for (std::size_t f = 0; f < 3; ++f) all = all && decode_field(record, keys[f], values).index == chosen[f];
    ok_records += all ? 1 : 0;
  }
  c.expect(ok_records == 100, std::to_string(ok_records) + "/100 records");
  c.note(std::to_string(ok_records) + "/100 three-field records fully decoded");
  return c.outcome();
}

Outcome codebooks() {
  Check c;
  for (std::size_t q = 3; q <= 16; ++q) {
    const auto thermo = build_codebook(QuantizerConfig::thermometer(q));
    const auto gray = build_codebook(QuantizerConfig::gray2(q));
    const auto distance = [](const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
      std::size_t n = 0;
      for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i] ? 1 : 0;
      return n;
    };
    c.expect(thermo.codewords.size() == q, "thermometer count q=" + std::to_string(q));
    c.expect(gray.codewords.size() == q * (q - 1) / 2, "gray2 count q=" + std::to_string(q));
    for (std::size_t i = 1; i < thermo.codewords.size(); ++i) {
      c.expect(distance(thermo.codewords[i - 1], thermo.codewords[i]) == 1, "thermometer step q=" + std::to_string(q));
    }
    for (std::size_t i = 1; i < gray.codewords.size(); ++i) {
      c.expect(distance(gray.codewords[i - 1], gray.codewords[i]) == 2, "gray2 step q=" + std::to_string(q));
    }
    c.expect(std::set(thermo.codewords.begin(), thermo.codewords.end()).size() == thermo.codewords.size(),
             "thermometer distinct q=" + std::to_string(q));
    c.expect(std::set(gray.codewords.begin(), gray.codewords.end()).size() == gray.codewords.size(),
             "gray2 distinct q=" + std::to_string(q));
  }
  c.note("q = 3..16 exhaustive");
  return c.outcome();
}

Outcome random_projection() {
  Check c;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto r = gen_projection(10000, 136, 0.1, RngSeed{400 + s});
    c.expect(project_binarize(r, FeatureVector::Zero(136)).popcount() == 10000, "f = 0");
  }
  const auto r = gen_projection(10000, 136, 0.1, RngSeed{410});
  Rng rng(RngSeed{411});
  std::size_t invariant = 0;
  for (int t = 0; t < 1000; ++t) {
    FeatureVector f(136);
    for (auto& x : f) x = rng.normal();
    const double k = std::exp(rng.uniform(-10.0, 10.0));
    invariant += project_binarize(r, f) == project_binarize(r, k * f) ? 1 : 0;
  }
  c.expect(invariant == 1000, "scale invariance " + std::to_string(invariant) + "/1000");
  for (double s : {0.1, 2.0 / 3.0}) {
    const std::size_t rows = 10000, cols = 136;
    const auto p = gen_projection(rows, cols, s, RngSeed{420});
    const double n = static_cast<double>(rows * cols);
    const double half_width = 2.5758 * std::sqrt(n * s * (1.0 - s));
    const double nz = static_cast<double>(p.nonzeros());
    c.expect(std::abs(nz - n * s) <= half_width, "sparsity s=" + fmt(s) + " nonzeros " + fmt(nz, 8));
    c.note("s=" + fmt(s, 3) + ": " + fmt(nz / n, 5) + " in [" + fmt((n * s - half_width) / n, 5) + ", " +
           fmt((n * s + half_width) / n, 5) + "]");
  }
  return c.outcome();
}

LearnedModel random_learned(std::size_t n_r, std::size_t d, std::size_t n_b, std::uint64_t seed, ItemMemory& bands) {
  bands = band_item_memory(n_b, d, RngSeed{seed});
  TrainConfig cfg;
  cfg.seed = RngSeed{seed + 1};
  return init_model(n_r, d, 2, n_b, bands, cfg);
}

BandedFeatures random_banded(std::size_t n_r, std::size_t n_b, Rng& rng) {
  BandedFeatures f(static_cast<Eigen::Index>(n_r), static_cast<Eigen::Index>(n_b));
  for (auto& x : f.reshaped()) x = rng.normal();
  return f;
}

Outcome learned_projection() {
  Check c;
  // (a) central differences with the identity discretization.
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(RngSeed{500 + s});
    const std::size_t n_r = 2 + rng.below(7);
    const std::size_t d = 4 + rng.below(29);
    const std::size_t n_b = 1 + rng.below(5);
    ItemMemory bands;
    const auto model = random_learned(n_r, d, n_b, 600 + s, bands);
    const auto f = random_banded(n_r, n_b, rng);
    const auto& target = model.targets[0];
    const auto loss = [&](const LearnedModel& m) {
      return bce_with_logits(forward(m, f, Discretization::identity).logits, target);
    };
    const auto pass = forward(model, f, Discretization::identity);
    // dL/dS of the mean BCE.
    Eigen::VectorXd grad_s(pass.output.size());
    for (Eigen::Index j = 0; j < grad_s.size(); ++j) {
      const double sj = pass.output[j];
      const double t = target[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
      grad_s[j] = (-(t / sj) + (1.0 - t) / (1.0 - sj)) / static_cast<double>(d);
    }
    const Eigen::MatrixXd analytic = backward_ste(model, f, pass, grad_s, Discretization::identity);
    Eigen::MatrixXd numeric(analytic.rows(), analytic.cols());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < numeric.rows(); ++i) {
      for (Eigen::Index j = 0; j < numeric.cols(); ++j) {
        auto plus = model;
        auto minus = model;
        plus.weights(i, j) += h;
        minus.weights(i, j) -= h;
        numeric(i, j) = (loss(plus) - loss(minus)) / (2.0 * h);
      }
    }
    const double rel = (analytic - numeric).norm() / numeric.norm();
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-5, "gradient instance " + std::to_string(s) + " rel " + fmt(rel));
  }
  c.note("(a) worst relative error " + fmt(worst, 3));

  // (b) hard forward against the binary encoder, odd band counts.
  std::size_t equal = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(RngSeed{700 + s});
    const std::size_t n_b = 1 + 2 * rng.below(7);
    const std::size_t d = 64 + rng.below(1000);
    const std::size_t n_r = 3 + rng.below(30);
    ItemMemory bands;
    const auto model = random_learned(n_r, d, n_b, 800 + s, bands);
    const auto f = random_banded(n_r, n_b, rng);
    const DenseProjectionEmbedder<double> embedder(export_model(model).projection);
    Rng ties(RngSeed{s});
    const auto encoded =
        std::get<Hypervector>(encode_trial(f, embedder, bands, {EmbeddingKind::learned, d, true, {}}, ties));
    equal += hard_output(forward(model, f)) == encoded ? 1 : 0;
  }
  c.expect(equal == 100, "hard forward " + std::to_string(equal) + "/100");
  c.note("(b) " + std::to_string(equal) + "/100 bit-exact");

  // (c) separable two-class features at d = 1000.
  const std::size_t n_r = 16, n_b = 3, d = 1000;
  Rng rng(RngSeed{900});
  std::vector<BandedFeatures> means{random_banded(n_r, n_b, rng), random_banded(n_r, n_b, rng)};
  std::vector<LabeledFeatures> data;
  for (int i = 0; i < 100; ++i) {
    for (int cls = 0; cls < 2; ++cls) {
      BandedFeatures f = means[static_cast<std::size_t>(cls)];
      for (auto& x : f.reshaped()) x += 0.5 * rng.normal();
      data.push_back({f, cls + 1});
    }
  }
  const auto bands = band_item_memory(n_b, d, RngSeed{901});
  TrainConfig cfg;
  cfg.seed = RngSeed{902};
  cfg.epochs = 50;
  const auto trained = train(init_model(n_r, d, 2, n_b, bands, cfg), data, cfg);
  const auto exported = export_model(trained);
  const DenseProjectionEmbedder<double> embedder(exported.projection);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Rng ties(trial_tie_seed(RngSeed{903}, i));
    const auto q = std::get<Hypervector>(
        encode_trial(data[i].features, embedder, bands, {EmbeddingKind::learned, d, true, {}}, ties));
    correct += am_classify(exported.memory, q) == data[i].label ? 1 : 0;
  }
  const double acc = 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
  c.expect(acc >= 95.0, "training accuracy " + fmt(acc));
  c.note("(c) training accuracy " + fmt(acc) + "% after 50 epochs");
  return c.outcome();
}

Eigen::MatrixXd random_spd(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd a(n, 2 * n);
  for (auto& x : a.reshaped()) x = rng.normal();
  return a * a.transpose() / static_cast<double>(2 * n) + 0.05 * Eigen::MatrixXd::Identity(n, n);
}

Outcome riemann_kernel() {
  Check c;
  Rng rng(RngSeed{1000});
  double worst_zero = 0.0, worst_norm = 0.0, worst_scale = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.below(21));
    std::vector<Eigen::MatrixXd> train;
    for (int i = 0; i < 5; ++i) train.push_back(random_spd(n, rng));
    const auto w = fit_reference(train);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    for (const auto& m : train) mean += m / 5.0;
    worst_zero = std::max(worst_zero, riemann_features(mean, w).cwiseAbs().maxCoeff());

    const Eigen::MatrixXd test = random_spd(n, rng);
    const auto f = riemann_features(test, w);
    const Eigen::MatrixXd whitened = w * test * w;
    const SymmetricEigen e = symmetric_eigen(whitened);
    const Eigen::MatrixXd logm = spectral_apply(e, [](double x) { return std::log(x); });
    worst_norm = std::max(worst_norm, std::abs(f.norm() - logm.norm()));

    const double k = std::exp(rng.uniform(-5.0, 5.0));
    std::vector<Eigen::MatrixXd> scaled;
    for (const auto& m : train) scaled.push_back(k * m);
    worst_scale = std::max(worst_scale, (riemann_features(k * test, fit_reference(scaled)) - f).cwiseAbs().maxCoeff());
  }
  c.expect(worst_zero <= 1e-8, "C = C_ref features " + fmt(worst_zero));
  c.expect(worst_norm <= 1e-9, "norm preservation " + fmt(worst_norm));
  c.expect(worst_scale <= 1e-8, "scale invariance " + fmt(worst_scale));
  c.expect(riemann_feature_count(22) == 253 && riemann_feature_count(16) == 136, "feature counts");
  c.note("max |f| at reference " + fmt(worst_zero, 2) + ", norm gap " + fmt(worst_norm, 2) + ", scale gap " +
         fmt(worst_scale, 2) + ", n_R(22)=" + std::to_string(riemann_feature_count(22)) +
         ", n_R(16)=" + std::to_string(riemann_feature_count(16)));
  return c.outcome();
}

Outcome am_and_kmeans() {
  Check c;
  // am_train against per-class bundles drawn from the same stream.
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(RngSeed{1100 + s});
    const std::size_t n_cl = 2 + rng.below(4);
    std::vector<std::vector<Hypervector>> per_class(n_cl);
    std::vector<EncodedTrial> enc;
    std::vector<int> labels;
    const auto n = n_cl + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      const auto cls = i < n_cl ? i : rng.below(n_cl);
      per_class[cls].push_back(random_hv(1000, rng));
      enc.emplace_back(per_class[cls].back());
      labels.push_back(static_cast<int>(cls) + 1);
    }
    Rng a(RngSeed{s});
    Rng b(RngSeed{s});
    const auto am = am_train(enc, labels, n_cl, a);
    for (std::size_t cls = 0; cls < n_cl; ++cls) {
      c.expect(am.prototype(static_cast<int>(cls) + 1) == bundle(per_class[cls], b), "am_train vs bundle");
    }
  }

  std::size_t monotone = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(RngSeed{1200 + s});
    std::vector<Hypervector> samples;
    const auto n = 10 + rng.below(40);
    // Loose groups so runs take several iterations.
    std::vector<Hypervector> centers;
    for (int g = 0; g < 4; ++g) centers.push_back(random_hv(500, rng));
    for (std::size_t i = 0; i < n; ++i) samples.push_back(flip_fraction(centers[rng.below(4)], 0.3, rng));
    const auto run = hd_kmeans(samples, 1 + rng.below(5), 100, Seeding::random, rng);
    bool ok = true;
    for (std::size_t i = 1; i < run.objective_history.size(); ++i) {
      ok = ok && run.objective_history[i] <= run.objective_history[i - 1];
    }
    monotone += ok ? 1 : 0;
  }
  c.expect(monotone == 100, "monotone runs " + std::to_string(monotone) + "/100");

  std::size_t recovered = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(RngSeed{1300 + s});
    const auto a = random_hv(2000, rng);
    const auto b = flip_exactly(a, 800, rng);
    std::vector<std::vector<Hypervector>> per_class(1);
    for (int i = 0; i < 25; ++i) {
      per_class[0].push_back(flip_fraction(a, 0.05, rng));
      per_class[0].push_back(flip_fraction(b, 0.05, rng));
    }
    KMeansConfig cfg;
    cfg.k = 2;
    const auto am = am_kmeans(per_class, cfg, RngSeed{1400 + s});
    const auto& p0 = am.prototype(1, 0);
    const auto& p1 = am.prototype(1, 1);
    const bool ok = (hamming(p0, a) <= 0.1 && hamming(p1, b) <= 0.1) || (hamming(p0, b) <= 0.1 && hamming(p1, a) <= 0.1);
    recovered += ok ? 1 : 0;
  }
  c.expect(recovered == 10, "planted clusters " + std::to_string(recovered) + "/10");
  c.note("bundle equivalence exact on 20 memories, monotone " + std::to_string(monotone) + "/100, planted " +
         std::to_string(recovered) + "/10");
  return c.outcome();
}

ExperimentConfig synthetic_config(const std::vector<std::string>& sets, std::uint64_t seed) {
  ConfigMap map;
  map.set("features.bands", "8-12,16-20,24-28");
  for (const auto& s : sets) map.set(s);
  map.set("seed", std::to_string(seed));
  return ExperimentConfig::from_map(map);
}

double mean_accuracy(const std::vector<std::string>& sets, std::size_t n_seeds, double* worst = nullptr) {
  double sum = 0.0;
  double low = 100.0;
  for (std::uint64_t s = 1; s <= n_seeds; ++s) {
    const auto cfg = synthetic_config(sets, s);
    const auto report = run_experiment(cfg, load_experiment_data(cfg));
    sum += report.mean_accuracy;
    low = std::min(low, report.mean_accuracy);
  }
  if (worst != nullptr) *worst = low;
  return sum / static_cast<double>(n_seeds);
}

Outcome end_to_end() {
  Check c;
  struct Kind {
    std::string name;
    std::vector<std::string> sets;
  };
  const std::vector<Kind> kinds{
      {"thermometer", {"embedding.kind=thermometer", "embedding.q=8"}},
      {"gray2", {"embedding.kind=gray2", "embedding.q=4"}},
      {"random_projection", {"embedding.kind=random_projection", "embedding.dim=1000"}},
      {"learned", {"embedding.kind=learned", "embedding.dim=1000"}},
  };
  std::vector<double> acc;
  for (const auto& k : kinds) {
    double worst = 0.0;
    acc.push_back(mean_accuracy(k.sets, 10, &worst));
    c.expect(acc.back() >= 90.0, k.name + " " + fmt(acc.back()));
    c.note(k.name + " " + fmt(acc.back()) + "% (min " + fmt(worst) + ")");
  }
  c.expect(acc[3] >= acc[2], "learned " + fmt(acc[3]) + " < random projection " + fmt(acc[2]));
  return c.outcome();
}

Outcome footprint_formulas() {
  Check c;
  Rng rng(RngSeed{1500});
  for (int t = 0; t < 20; ++t) {
    FootprintParams p;
    p.n_classes = 2 + rng.below(10);
    p.dim = 100 + rng.below(20000);
    p.n_features = 3 + rng.below(300);
    p.n_bands = 1 + rng.below(50);
    const std::uint64_t n_cl = p.n_classes, d = p.dim, n_r = p.n_features, n_b = p.n_bands;
    const std::vector<std::pair<EmbeddingKind, std::uint64_t>> embedding{
        {EmbeddingKind::thermometer, 0}, {EmbeddingKind::gray2, 0},
        {EmbeddingKind::random_projection, 2 * n_r * d}, {EmbeddingKind::learned, 8 * n_r * d}};
    for (const auto& [kind, bits] : embedding) {
      p.kind = kind;
      const auto f = footprint_bits(p);
      c.expect(f.associative_memory == n_cl * d, "AM");
      c.expect(f.encoder == d, "encoder");
      c.expect(f.embedding == bits, "embedding " + to_string(kind));
      c.expect(f.svm_reference == 64 * n_cl * n_r * n_b, "svm");
    }
  }
  c.note("20 tuples x 4 embedding kinds");
  return c.outcome();
}

Outcome dimensionality_trend() {
  Check c;
  const double small = mean_accuracy({"embedding.kind=random_projection", "embedding.dim=100"}, 10);
  const double large = mean_accuracy({"embedding.kind=random_projection", "embedding.dim=10000"}, 10);
  c.expect(large > small, "d=10000 " + fmt(large) + " vs d=100 " + fmt(small));
  c.note("d=100: " + fmt(small) + "%, d=10000: " + fmt(large) + "%");
  return c.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: none
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "hypervector algebra", 5.0, hypervector_algebra},
      {2, "robust retrieval", 5.0, robust_retrieval},
      {3, "record decode", 0.0, record_decode},
      {4, "codebook properties", 0.0, codebooks},
      {5, "random projection", 0.0, random_projection},
      {6, "learned projection", 60.0, learned_projection},
      {7, "riemannian kernel", 0.0, riemann_kernel},
      {8, "associative memory and k-means", 0.0, am_and_kmeans},
      {9, "end-to-end synthetic", 300.0, end_to_end},
      {10, "footprint formulas", 0.0, footprint_formulas},
      {11, "dimensionality trend", 0.0, dimensionality_trend},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_s > 0.0 && secs > cr.budget_s) {
      out.pass = false;
      out.detail += "; over the " + fmt(cr.budget_s) + " s budget";
    }
    failed += out.pass ? 0 : 1;
    std::printf("[%s] %2d %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", cr.id, cr.name, secs, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
