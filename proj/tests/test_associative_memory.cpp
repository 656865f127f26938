#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "hdemb/associative_memory.hpp"
#include "hdemb/errors.hpp"
#include "hdemb/quantize.hpp"
#include "test_support.hpp"

namespace hdemb {
namespace {

using testing::Bits;

Hypervector flip_fraction(const Hypervector& v, double p, Rng& rng) {
  Hypervector out = v;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (rng.uniform() < p) out.set(i, !v[i]);
  }
  return out;
}

TEST(AmTrain, OneSamplePerClassIsThePrototype) {
  Rng rng(RngSeed{1});
  std::vector<EncodedTrial> enc;
  std::vector<Hypervector> raw;
  for (int c = 0; c < 4; ++c) {
    raw.push_back(random_hv(300, rng));
    enc.emplace_back(raw.back());
  }
  const std::vector<int> labels{1, 2, 3, 4};
  Rng ties(RngSeed{2});
  const auto am = am_train(enc, labels, 4, ties);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(am.prototype(c + 1), raw[static_cast<std::size_t>(c)]);
  EXPECT_EQ(am.counts()[0], 1U);
}

TEST(AmTrain, MajorityOfAAB) {
  Rng rng(RngSeed{3});
  const auto a = random_hv(256, rng);
  const auto b = random_hv(256, rng);
  const std::vector<EncodedTrial> enc{a, a, b};
  const std::vector<int> labels{1, 1, 1};
  Rng ties(RngSeed{4});
  EXPECT_EQ(am_train(enc, labels, 1, ties).prototype(1), a);
}

TEST(AmTrain, CountsThresholdByHand) {
  const std::vector<EncodedTrial> enc{Accumulator::from_counts({3, 1, 2}, 3)};
  const std::vector<int> labels{1};
  Rng ties(RngSeed{5});
  const auto am = am_train(enc, labels, 1, ties);
  EXPECT_EQ(testing::bits(am.prototype(1)), (Bits{1, 0, 1}));
  EXPECT_EQ(am.counts()[0], 3U);
}

TEST(AmTrain, UnclippedInputsCountBands) {
  const std::vector<EncodedTrial> enc{Accumulator::from_counts({5, 0, 2, 13}, 13), Accumulator::from_counts({1, 1, 13, 0}, 13)};
  const std::vector<int> labels{1, 1};
  Rng ties(RngSeed{6});
  const auto am = am_train(enc, labels, 1, ties);
  EXPECT_EQ(am.counts()[0], 26U);
  // Sums 6, 1, 15, 13 against 13 (tie at 13 is broken randomly).
  EXPECT_FALSE(am.prototype(1)[0]);
  EXPECT_FALSE(am.prototype(1)[1]);
  EXPECT_TRUE(am.prototype(1)[2]);
}

TEST(AmTrain, EqualsPerClassBundleWithSharedStream) {
  Rng rng(RngSeed{7});
  std::vector<EncodedTrial> enc;
  std::vector<int> labels;
  std::vector<std::vector<Hypervector>> per_class(3);
  for (int i = 0; i < 22; ++i) {
    const int c = i % 3;
    per_class[static_cast<std::size_t>(c)].push_back(random_hv(999, rng));
    enc.emplace_back(per_class[static_cast<std::size_t>(c)].back());
    labels.push_back(c + 1);
  }
  Rng ties(RngSeed{8});
  const auto am = am_train(enc, labels, 3, ties);
  Rng oracle(RngSeed{8});
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(am.prototype(static_cast<int>(c) + 1), bundle(per_class[c], oracle));
}

TEST(AmTrain, MissingClassesAreReported) {
  Rng rng(RngSeed{9});
  const std::vector<EncodedTrial> enc{random_hv(64, rng), random_hv(64, rng)};
  const std::vector<int> labels{1, 3};
  Rng ties(RngSeed{10});
  try {
    am_train(enc, labels, 4, ties);
    FAIL();
  } catch (const InvalidState& e) {
    EXPECT_NE(std::string(e.what()).find("2, 4"), std::string::npos) << e.what();
  }
  const std::vector<int> bad{1, 5};
  EXPECT_THROW(am_train(enc, bad, 4, ties), InvalidArgument);
}

TEST(AmClassify, HandExamples) {
  Rng rng(RngSeed{11});
  std::vector<Hypervector> protos;
  for (int i = 0; i < 3; ++i) protos.push_back(random_hv(10000, rng));
  const AssociativeMemory am(3, 1, protos, {1, 1, 1});
  EXPECT_EQ(am_classify(am, protos[1]), 2);
  EXPECT_EQ(am_classify(am, flip_fraction(protos[0], 0.1, rng)), 1);
  const AssociativeMemory same(2, 1, {protos[0], protos[0]}, {1, 1});
  EXPECT_EQ(am_classify(same, protos[0]), 1);
  EXPECT_THROW(am_classify(AssociativeMemory{}, protos[0]), InvalidState);
}

TEST(AmClassify, MultiPrototypeSlot) {
  Rng rng(RngSeed{12});
  std::vector<Hypervector> protos;
  for (int i = 0; i < 9; ++i) protos.push_back(random_hv(2000, rng));
  const AssociativeMemory am(3, 3, protos, std::vector<std::uint64_t>(9, 1));
  const auto r = am_classify_detail(am, flip_fraction(protos[7], 0.05, rng));
  EXPECT_EQ(r.label, 3);
  EXPECT_EQ(r.slot, 1U);
  EXPECT_EQ(&am.prototype(3, 1), &am.prototypes()[7]);
}

TEST(AmClassify, InvariantUnderCommonPermutation) {
  Rng rng(RngSeed{13});
  std::vector<Hypervector> protos;
  for (int i = 0; i < 4; ++i) protos.push_back(random_hv(1000, rng));
  const auto perm = random_permutation(1000, RngSeed{14});
  std::vector<Hypervector> permuted;
  for (const auto& p : protos) permuted.push_back(apply_permutation(p, perm));
  const AssociativeMemory a(4, 1, protos, {1, 1, 1, 1});
  const AssociativeMemory b(4, 1, permuted, {1, 1, 1, 1});
  for (int t = 0; t < 100; ++t) {
    const auto q = flip_fraction(protos[static_cast<std::size_t>(t % 4)], 0.45, rng);
    EXPECT_EQ(am_classify(a, q), am_classify(b, apply_permutation(q, perm)));
    EXPECT_EQ(am_classify(a, q), am_classify(a, permute(permute(q, 17), -17)));
  }
}

TEST(KMeans, ObjectiveNeverIncreases) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(RngSeed{100 + s});
    std::vector<Hypervector> samples;
    const auto n = 10 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) samples.push_back(random_hv(257, rng));
    const auto k = 1 + rng.below(5);
    const auto run = hd_kmeans(samples, k, 100, s % 2 == 0 ? Seeding::random : Seeding::d_squared, rng);
    for (std::size_t i = 1; i < run.objective_history.size(); ++i) {
      EXPECT_LE(run.objective_history[i], run.objective_history[i - 1]) << s;
    }
    EXPECT_EQ(run.assignment.size(), n);
    // Reported objective equals a recomputation from the final centroids.
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += hamming_count(samples[i], run.centroids[run.assignment[i]]);
    EXPECT_EQ(total, run.objective);
  }
}

TEST(KMeans, IdenticalSamples) {
  Rng rng(RngSeed{15});
  const auto v = random_hv(500, rng);
  const std::vector<Hypervector> samples(6, v);
  const auto run = hd_kmeans(samples, 3, 100, Seeding::random, rng);
  EXPECT_EQ(run.objective, 0U);
  for (const auto& c : run.centroids) EXPECT_EQ(c, v);
  EXPECT_THROW(hd_kmeans(samples, 7, 100, Seeding::random, rng), InvalidArgument);
}

TEST(KMeans, SingleClusterIsBundle) {
  Rng rng(RngSeed{16});
  std::vector<std::vector<Hypervector>> per_class(2);
  for (int i = 0; i < 7; ++i) per_class[0].push_back(random_hv(800, rng));
  for (int i = 0; i < 8; ++i) per_class[1].push_back(random_hv(800, rng));
  KMeansConfig cfg;
  cfg.k = 1;
  cfg.restarts = 1;
  const auto am = am_kmeans(per_class, cfg, RngSeed{17});
  for (std::size_t c = 0; c < 2; ++c) {
    Rng oracle(kmeans_restart_seed(RngSeed{17}, c, 0));
    EXPECT_EQ(am.prototype(static_cast<int>(c) + 1), bundle(per_class[c], oracle));
  }
  EXPECT_EQ(am.counts()[1], 8U);

  // Odd class sizes need no tie vector, so am_train agrees exactly.
  std::vector<EncodedTrial> enc(per_class[0].begin(), per_class[0].end());
  const std::vector<int> labels(7, 1);
  Rng ties(RngSeed{0});
  EXPECT_EQ(am_train(enc, labels, 1, ties).prototype(1), am.prototype(1));
}

TEST(KMeans, RecoversPlantedClusters) {
  for (auto seeding : {Seeding::random, Seeding::d_squared}) {
    Rng rng(RngSeed{18});
    const auto a = random_hv(2000, rng);
    Hypervector b = a;
    for (std::size_t i = 0; i < 800; ++i) b.set(i, !a[i]);  // ham 0.4
    std::vector<std::vector<Hypervector>> per_class(1);
    for (int i = 0; i < 20; ++i) {
      per_class[0].push_back(flip_fraction(a, 0.05, rng));
      per_class[0].push_back(flip_fraction(b, 0.05, rng));
    }
    KMeansConfig cfg;
    cfg.k = 2;
    cfg.seeding = seeding;
    const auto am = am_kmeans(per_class, cfg, RngSeed{19});
    const auto& p0 = am.prototype(1, 0);
    const auto& p1 = am.prototype(1, 1);
    const bool direct = hamming(p0, a) < 0.1 && hamming(p1, b) < 0.1;
    const bool swapped = hamming(p0, b) < 0.1 && hamming(p1, a) < 0.1;
    EXPECT_TRUE(direct || swapped);
    EXPECT_EQ(am.counts()[0] + am.counts()[1], 40U);
  }
}

TEST(KMeans, RestartSeedsAreDistinct) {
  EXPECT_FALSE(kmeans_restart_seed(RngSeed{1}, 0, 1) == kmeans_restart_seed(RngSeed{1}, 1, 0));
  EXPECT_FALSE(kmeans_restart_seed(RngSeed{1}, 0, 0) == kmeans_restart_seed(RngSeed{1}, 0, 1));
}

// Band votes that are individually noisy: each band's embedding of a trial
// is the class/band template with heavy bit noise.
double clipped_vs_unclipped_gap(std::uint64_t seed) {
  const std::size_t d = 1000, n_b = 5, n_cl = 4, n_train = 6, n_test = 40;
  Rng rng(RngSeed{seed});
  std::vector<Hypervector> band_vectors;
  for (std::size_t b = 0; b < n_b; ++b) band_vectors.push_back(random_hv(d, rng));
  std::vector<std::vector<Hypervector>> templates(n_cl);
  for (auto& t : templates) {
    for (std::size_t b = 0; b < n_b; ++b) t.push_back(random_hv(d, rng));
  }
  const auto trial = [&](std::size_t c) {
    Accumulator acc(d);
    for (std::size_t b = 0; b < n_b; ++b) acc.add(bind(flip_fraction(templates[c][b], 0.42, rng), band_vectors[b]));
    return acc;
  };
  std::vector<EncodedTrial> clipped, unclipped;
  std::vector<int> labels;
  Rng ties(RngSeed{seed + 1});
  for (std::size_t i = 0; i < n_train; ++i) {
    for (std::size_t c = 0; c < n_cl; ++c) {
      const auto acc = trial(c);
      unclipped.emplace_back(acc);
      clipped.emplace_back(binarize(acc, ties));
      labels.push_back(static_cast<int>(c) + 1);
    }
  }
  Rng t1(RngSeed{seed + 2});
  Rng t2(RngSeed{seed + 2});
  const auto am_c = am_train(clipped, labels, n_cl, t1);
  const auto am_u = am_train(unclipped, labels, n_cl, t2);
  double correct_c = 0.0, correct_u = 0.0;
  for (std::size_t i = 0; i < n_test; ++i) {
    for (std::size_t c = 0; c < n_cl; ++c) {
      const auto q = binarize(trial(c), ties);
      correct_c += am_classify(am_c, q) == static_cast<int>(c) + 1 ? 1.0 : 0.0;
      correct_u += am_classify(am_u, q) == static_cast<int>(c) + 1 ? 1.0 : 0.0;
    }
  }
  return (correct_u - correct_c) / static_cast<double>(n_test * n_cl);
}

TEST(AmTrain, UnclippedAtLeastAsAccurateOnAverage) {
  double gap = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) gap += clipped_vs_unclipped_gap(500 + s);
  EXPECT_GE(gap / 20.0, 0.0);
}

TEST(Similarity, Properties) {
  Rng rng(RngSeed{20});
  const auto v = random_hv(100, rng);
  EXPECT_EQ(prototype_similarity(AssociativeMemory(1, 1, {v}, {1})), Eigen::MatrixXd::Zero(1, 1));
  EXPECT_EQ(prototype_similarity(AssociativeMemory(3, 1, {v, v, v}, {1, 1, 1})), Eigen::MatrixXd::Zero(3, 3));
  std::vector<Hypervector> protos;
  for (int i = 0; i < 6; ++i) protos.push_back(random_hv(100, rng));
  const auto m = prototype_similarity(AssociativeMemory(3, 2, protos, std::vector<std::uint64_t>(6, 1)));
  EXPECT_EQ(m, m.transpose());
  EXPECT_EQ(m.diagonal(), Eigen::VectorXd::Zero(6));
  EXPECT_GE(m.minCoeff(), 0.0);
  EXPECT_LE(m.maxCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(m(0, 4), hamming(protos[0], protos[4]));
  EXPECT_THROW(prototype_similarity(AssociativeMemory{}), InvalidState);
}

TEST(Checkpoint, RoundTrip) {
  Rng rng(RngSeed{21});
  std::vector<Hypervector> protos;
  for (int i = 0; i < 6; ++i) protos.push_back(random_hv(333, rng));
  const AssociativeMemory am(2, 3, protos, {1, 2, 3, 4, 5, 6});
  const auto path = std::filesystem::temp_directory_path() / "hdemb_am.bin";
  save_associative_memory(am, path);
  EXPECT_EQ(load_associative_memory(path), am);
  std::filesystem::remove(path);
}

TEST(Construction, Validation) {
  Rng rng(RngSeed{22});
  const auto v = random_hv(64, rng);
  EXPECT_THROW(AssociativeMemory(2, 1, {v}, {1}), InvalidArgument);
  EXPECT_THROW(AssociativeMemory(1, 0, {}, {}), InvalidArgument);
  EXPECT_THROW(AssociativeMemory(2, 1, {v, random_hv(65, rng)}, {1, 1}), InvalidArgument);
  EXPECT_THROW(AssociativeMemory(1, 1, {v}, {}), InvalidArgument);
}

}  // namespace
}  // namespace hdemb
