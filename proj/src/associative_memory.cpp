#include "hdemb/associative_memory.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "binary_io.hpp"
#include "hdemb/errors.hpp"

namespace hdemb {

AssociativeMemory::AssociativeMemory(std::size_t n_classes, std::size_t k, std::vector<Hypervector> prototypes,
                                     std::vector<std::uint64_t> counts)
    : n_classes_(n_classes), k_(k), prototypes_(std::move(prototypes)), counts_(std::move(counts)) {
  if (k_ == 0) throw InvalidArgument("AssociativeMemory: k must be >= 1");
  if (prototypes_.size() != n_classes_ * k_) {
    throw InvalidArgument("AssociativeMemory: expected n_cl * k prototypes");
  }
  if (counts_.size() != prototypes_.size()) throw InvalidArgument("AssociativeMemory: counts size mismatch");
  for (const auto& p : prototypes_) {
    if (p.dim() != prototypes_.front().dim()) throw InvalidArgument("AssociativeMemory: dimension mismatch");
  }
}

const Hypervector& AssociativeMemory::prototype(int label, std::size_t slot) const {
  if (label < 1 || static_cast<std::size_t>(label) > n_classes_ || slot >= k_) {
    throw InvalidArgument("AssociativeMemory::prototype: index out of range");
  }
  return prototypes_[static_cast<std::size_t>(label - 1) * k_ + slot];
}

AssociativeMemory am_train(std::span<const EncodedTrial> encoded, std::span<const int> labels,
                           std::size_t n_classes, Rng& rng) {
  if (encoded.size() != labels.size()) throw InvalidArgument("am_train: encodings and labels differ in length");
  if (encoded.empty() || n_classes == 0) throw InvalidArgument("am_train: no training data");
  const std::size_t dim = std::visit([](const auto& e) { return e.dim(); }, encoded.front());

  std::vector<Accumulator> acc(n_classes, Accumulator(dim));
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    const int label = labels[i];
    if (label < 1 || static_cast<std::size_t>(label) > n_classes) {
      throw InvalidArgument("am_train: label " + std::to_string(label) + " outside 1.." + std::to_string(n_classes));
    }
    std::visit([&](const auto& e) { acc[static_cast<std::size_t>(label - 1)].add(e); }, encoded[i]);
  }

  std::string missing;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (acc[c].n_added() == 0) missing += (missing.empty() ? "" : ", ") + std::to_string(c + 1);
  }
  if (!missing.empty()) throw InvalidState("am_train: no training samples for class(es) " + missing);

  std::vector<Hypervector> prototypes;
  std::vector<std::uint64_t> counts;
  for (const auto& a : acc) {
    prototypes.push_back(binarize(a, rng));
    counts.push_back(a.n_added());
  }
  return AssociativeMemory(n_classes, 1, std::move(prototypes), std::move(counts));
}

Classification am_classify_detail(const AssociativeMemory& am, const Hypervector& q) {
  if (am.empty()) throw InvalidState("am_classify: associative memory is empty");
  const std::size_t k = am.prototypes_per_class();
  const auto prototypes = am.prototypes();
  std::size_t best = 0;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < prototypes.size(); ++i) {
    const std::size_t c = hamming_count(prototypes[i], q);
    if (c < best_count) {
      best_count = c;
      best = i;
    }
  }
  return Classification{static_cast<int>(best / k) + 1, best % k,
                        static_cast<double>(best_count) / static_cast<double>(q.dim())};
}

namespace {

std::vector<std::size_t> initial_centroids(std::span<const Hypervector> samples, std::size_t k, Seeding seeding,
                                           Rng& rng) {
  const std::size_t n = samples.size();
  std::vector<std::size_t> chosen;
  if (seeding == Seeding::random) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(idx[i], idx[j]);
      chosen.push_back(idx[i]);
    }
    return chosen;
  }
  // D^2 weighting: next centroid drawn proportionally to squared distance.
  chosen.push_back(static_cast<std::size_t>(rng.below(n)));
  std::vector<double> d2(n, std::numeric_limits<double>::max());
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto h = static_cast<double>(hamming_count(samples[i], samples[chosen.back()]));
      d2[i] = std::min(d2[i], h * h);
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      // Every sample coincides with a centroid; fall back to the first unused index.
      while (std::find(chosen.begin(), chosen.end(), pick) != chosen.end()) ++pick;
    } else {
      double u = rng.uniform() * total;
      for (pick = 0; pick + 1 < n; ++pick) {
        if (u < d2[pick]) break;
        u -= d2[pick];
      }
      while (d2[pick] <= 0.0) pick = (pick + 1) % n;
    }
    chosen.push_back(pick);
  }
  return chosen;
}

}  // namespace

ClusteringRun hd_kmeans(std::span<const Hypervector> samples, std::size_t k, std::size_t max_iters,
                        Seeding seeding, Rng& rng) {
  const std::size_t n = samples.size();
  if (k == 0) throw InvalidArgument("hd_kmeans: k must be >= 1");
  if (k > n) {
    throw InvalidArgument("hd_kmeans: k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " samples");
  }
  const std::size_t dim = samples.front().dim();

  ClusteringRun run;
  // With a single cluster the initial centroid is irrelevant, so no draw.
  if (k == 1) {
    run.centroids.push_back(samples.front());
  } else {
    for (auto i : initial_centroids(samples, k, seeding, rng)) run.centroids.push_back(samples[i]);
  }

  std::vector<std::size_t> assignment(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> distance(n, 0);
  // Assignment step; returns true if any sample moved.
  auto assign = [&] {
    bool changed = false;
    std::uint64_t objective = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      std::size_t best_d = std::numeric_limits<std::size_t>::max();
      for (std::size_t c = 0; c < k; ++c) {
        const std::size_t d = hamming_count(samples[i], run.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[i] != best) changed = true;
      assignment[i] = best;
      distance[i] = best_d;
      objective += best_d;
    }
    run.objective_history.push_back(objective);
    run.objective = objective;
    return changed;
  };

  bool converged = false;
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    run.iterations = iter + 1;
    if (!assign()) {
      converged = true;
      break;
    }

    // Empty clusters take the sample farthest from its centroid among
    // clusters that can spare one.
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : assignment) ++sizes[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[assignment[i]] < 2) continue;
        if (far == n || distance[i] > distance[far]) far = i;
      }
      --sizes[assignment[far]];
      assignment[far] = c;
      distance[far] = 0;
      ++sizes[c];
    }

    for (std::size_t c = 0; c < k; ++c) {
      Accumulator acc(dim);
      for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] == c) acc.add(samples[i]);
      }
      run.centroids[c] = binarize(acc, rng);
    }
  }
  // Out of iterations right after an update: re-assign so the reported
  // objective and assignment belong to the returned centroids.
  if (!converged) assign();
  run.assignment = std::move(assignment);
  return run;
}

RngSeed kmeans_restart_seed(RngSeed seed, std::size_t class_index, std::size_t restart) {
  return derive_seed(seed, stream::kKMeans, (static_cast<std::uint64_t>(class_index) << 32) | restart);
}

AssociativeMemory am_kmeans(std::span<const std::vector<Hypervector>> per_class, const KMeansConfig& cfg,
                            RngSeed seed) {
  if (per_class.empty()) throw InvalidArgument("am_kmeans: no classes");
  if (cfg.restarts == 0) throw InvalidArgument("am_kmeans: restarts must be >= 1");
  std::vector<Hypervector> prototypes;
  std::vector<std::uint64_t> counts;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const auto& samples = per_class[c];
    if (samples.size() < cfg.k) {
      throw InvalidArgument("am_kmeans: class " + std::to_string(c + 1) + " has " + std::to_string(samples.size()) +
                            " samples, fewer than k = " + std::to_string(cfg.k));
    }
    ClusteringRun best;
    bool have_best = false;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
      Rng rng(kmeans_restart_seed(seed, c, r));
      auto run = hd_kmeans(samples, cfg.k, cfg.max_iters, cfg.seeding, rng);
      if (!have_best || run.objective < best.objective) {
        best = std::move(run);
        have_best = true;
      }
    }
    std::vector<std::uint64_t> sizes(cfg.k, 0);
    for (auto a : best.assignment) ++sizes[a];
    for (std::size_t j = 0; j < cfg.k; ++j) {
      prototypes.push_back(best.centroids[j]);
      counts.push_back(sizes[j]);
    }
  }
  return AssociativeMemory(per_class.size(), cfg.k, std::move(prototypes), std::move(counts));
}

Eigen::MatrixXd prototype_similarity(const AssociativeMemory& am) {
  if (am.empty()) throw InvalidState("prototype_similarity: associative memory is empty");
  const auto p = am.prototypes();
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = m(j, i) = hamming(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

namespace {
constexpr char kAmMagic[5] = "HDAM";
constexpr std::uint16_t kAmVersion = 1;
}  // namespace

void save_associative_memory(const AssociativeMemory& am, const std::filesystem::path& path) {
  io::Writer out;
  io::put_header(out, kAmMagic, kAmVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(am.n_classes()));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(am.prototypes_per_class()));
  out.put<std::uint64_t>(am.dim());
  for (const auto& p : am.prototypes()) io::put_hypervector(out, p);
  for (auto c : am.counts()) out.put<std::uint64_t>(c);
  out.write_file(path);
}

AssociativeMemory load_associative_memory(const std::filesystem::path& path) {
  auto in = io::Reader::from_file(path);
  io::expect_header(in, kAmMagic, kAmVersion);
  const auto n_cl = in.get<std::uint32_t>("n_cl");
  const auto k = in.get<std::uint32_t>("k");
  const auto dim = in.get<std::uint64_t>("d");
  if (n_cl == 0 || k == 0 || dim == 0) throw FormatError("empty associative memory header", 6);
  std::vector<Hypervector> prototypes;
  for (std::size_t i = 0; i < std::size_t{n_cl} * k; ++i) prototypes.push_back(io::get_hypervector(in, dim, "prototype"));
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < std::size_t{n_cl} * k; ++i) counts.push_back(in.get<std::uint64_t>("counts"));
  return AssociativeMemory(n_cl, k, std::move(prototypes), std::move(counts));
}

}  // namespace hdemb
