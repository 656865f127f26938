#include "hdemb/experiment.hpp"

#include <chrono>
#include <fstream>

#include "hdemb/dense_projection.hpp"
#include "hdemb/errors.hpp"
#include "hdemb/parallel.hpp"
#include "hdemb/quantize.hpp"
#include "hdemb/random_projection.hpp"
#include "hdemb/synthetic.hpp"

namespace hdemb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<TrialTensor> gather(const TrialDataset& ds, std::span<const std::size_t> indices) {
  std::vector<TrialTensor> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(ds.trials.at(i));
  return out;
}

}  // namespace

TrialDataset load_experiment_data(const ExperimentConfig& cfg) {
  if (cfg.data_path.empty()) return generate_synthetic(cfg.synth.to_spec(), cfg.threads);
  const std::filesystem::path path(cfg.data_path);
  if (path.extension() == ".csv") return import_csv(path, cfg.csv_fs);
  return load_dataset(path);
}

std::shared_ptr<const Embedder> make_embedder(const ExperimentConfig& cfg, std::size_t n_features, std::size_t dim) {
  switch (cfg.embedding) {
    case EmbeddingKind::thermometer:
      return std::make_shared<QuantizedEmbedder>(
          n_features, QuantizerConfig::thermometer(cfg.bits_per_feature, cfg.clip_range, cfg.permutation_seed()));
    case EmbeddingKind::gray2:
      return std::make_shared<QuantizedEmbedder>(
          n_features, QuantizerConfig::gray2(cfg.bits_per_feature, cfg.clip_range, cfg.permutation_seed()));
    case EmbeddingKind::random_projection:
      return std::make_shared<RandomProjectionEmbedder>(
          gen_projection(dim, n_features, cfg.sparsity, cfg.projection_seed()));
    case EmbeddingKind::learned: break;
  }
  throw InvalidArgument("make_embedder: learned embeddings come from training");
}

void check_compatible(const ExperimentConfig& cfg, const TrialDataset& ds) {
  cfg.validate();
  ds.validate();
  if (ds.size() == 0) throw DataError("dataset is empty");
  cfg.resolved_dim(ds.channels());
  try {
    cfg.filter_bank().validate(ds.fs);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

Pipeline fit_pipeline(const ExperimentConfig& cfg, const TrialDataset& ds, std::span<const std::size_t> train,
                      std::size_t fold, StageTimes* times) {
  Pipeline p;
  p.config = cfg;
  const std::size_t dim = cfg.resolved_dim(ds.channels());
  const std::size_t n_features = riemann_feature_count(ds.channels());
  const std::vector<TrialTensor> train_trials = gather(ds, train);
  const std::size_t inner_threads = 1;

  auto start = Clock::now();
  p.features = fit_riemann(train_trials, RiemannConfig{cfg.filter_bank(), cfg.alpha}, inner_threads);
  p.filters = design_filterbank(FilterBankConfig{p.features.bands}, ds.fs);
  const auto banded = transform_trials(p.features, train_trials, inner_threads);
  if (times != nullptr) times->fit_features = seconds_since(start);

  p.bands = band_item_memory(p.features.n_bands(), dim, cfg.item_memory_seed());

  start = Clock::now();
  if (cfg.embedding == EmbeddingKind::learned) {
    TrainConfig tc = cfg.train;
    tc.seed = cfg.learned_seed(fold);
    std::vector<LabeledFeatures> samples;
    samples.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) samples.push_back({banded[i], ds.labels[train[i]]});
    LearnedModel model = init_model(n_features, dim, ds.n_classes, p.features.n_bands(), p.bands, tc);
    model = hdemb::train(std::move(model), samples, tc);
    auto exported = export_model(model, cfg.float8_weights);
    p.embedder = std::make_shared<DenseProjectionEmbedder<double>>(std::move(exported.projection));
    p.memory = std::move(exported.memory);
    p.learned = std::move(model);
    if (times != nullptr) times->train_embedding = seconds_since(start);
    return p;
  }
  p.embedder = make_embedder(cfg, n_features, dim);
  if (times != nullptr) times->train_embedding = seconds_since(start);

  start = Clock::now();
  std::vector<EncodedTrial> encoded;
  encoded.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) encoded.push_back(encode_features(p, banded[i], train[i]));
  if (cfg.am.k == 1) {
    std::vector<int> labels;
    for (auto i : train) labels.push_back(ds.labels[i]);
    Rng rng(cfg.am_seed(fold));
    p.memory = am_train(encoded, labels, ds.n_classes, rng);
  } else {
    std::vector<std::vector<Hypervector>> per_class(ds.n_classes);
    for (std::size_t i = 0; i < train.size(); ++i) {
      per_class[static_cast<std::size_t>(ds.labels[train[i]] - 1)].push_back(std::get<Hypervector>(encoded[i]));
    }
    p.memory = am_kmeans(per_class, cfg.am, cfg.kmeans_seed(fold));
  }
  if (times != nullptr) times->train_am = seconds_since(start);
  return p;
}

EncodedTrial encode_features(const Pipeline& p, const BandedFeatures& banded, std::size_t trial_index) {
  const EncoderConfig enc{p.config.embedding, p.dim(), p.config.clip_output, p.config.item_memory_seed()};
  Rng ties(trial_tie_seed(p.config.tie_seed(), trial_index));
  return encode_trial(banded, *p.embedder, p.bands, enc, ties);
}

std::vector<int> predict(const Pipeline& p, const TrialDataset& ds, std::span<const std::size_t> indices,
                         StageTimes* times) {
  if (ds.fs != p.features.fs) {
    throw DataError("dataset sampled at " + format_double(ds.fs) + " Hz, model fitted at " +
                    format_double(p.features.fs) + " Hz");
  }
  const auto start = Clock::now();
  std::vector<int> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    const auto banded = transform_trial(p.features, p.filters, ds.trials.at(i));
    const EncoderConfig enc{p.config.embedding, p.dim(), true, p.config.item_memory_seed()};
    Rng ties(trial_tie_seed(p.config.tie_seed(), i));
    const auto encoded = encode_trial(banded, *p.embedder, p.bands, enc, ties);
    out.push_back(am_classify(p.memory, std::get<Hypervector>(encoded)));
  }
  if (times != nullptr && !indices.empty()) {
    times->inference_per_trial = seconds_since(start) / static_cast<double>(indices.size());
  }
  return out;
}

FootprintParams footprint_params(const ExperimentConfig& cfg, std::size_t n_channels, std::size_t n_classes) {
  FootprintParams fp;
  fp.kind = cfg.embedding;
  fp.n_classes = n_classes;
  fp.dim = cfg.resolved_dim(n_channels);
  fp.n_features = riemann_feature_count(n_channels);
  fp.n_bands = cfg.filter_bank().bands.size();
  fp.prototypes_per_class = cfg.am.k;
  return fp;
}

RunReport run_experiment(const ExperimentConfig& cfg, const TrialDataset& ds) {
  check_compatible(cfg, ds);
  const auto folds = make_folds(ds, cfg.folds, cfg.by_session, cfg.fold_seed());

  RunReport report;
  report.config = cfg.to_map();
  report.bands = cfg.filter_bank().bands;
  report.n_classes = ds.n_classes;
  report.n_channels = ds.channels();
  report.n_features = riemann_feature_count(ds.channels());
  report.dim = cfg.resolved_dim(ds.channels());
  report.footprint = footprint_bits(footprint_params(cfg, ds.channels(), ds.n_classes));
  report.folds.resize(folds.size());

  parallel_for(folds.size(), cfg.threads, [&](std::size_t f) {
    FoldResult& out = report.folds[f];
    const Pipeline p = fit_pipeline(cfg, ds, folds[f].train, f, &out.times);
    out.test_indices = folds[f].test;
    out.predictions = predict(p, ds, folds[f].test, &out.times);
    for (auto i : folds[f].test) out.labels.push_back(ds.labels[i]);
    out.accuracy = accuracy(out.predictions, out.labels);
    out.confusion = confusion_matrix(out.predictions, out.labels, ds.n_classes);
    out.prototype_similarity = prototype_similarity(p.memory);
  });

  std::vector<double> accs;
  report.confusion = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(ds.n_classes), static_cast<Eigen::Index>(ds.n_classes));
  for (const auto& f : report.folds) {
    accs.push_back(f.accuracy);
    report.confusion += f.confusion;
  }
  std::tie(report.mean_accuracy, report.std_accuracy) = mean_std(accs);
  return report;
}

void save_pipeline(const Pipeline& p, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "config.txt");
    if (!out) throw DataError("cannot write '" + (dir / "config.txt").string() + "'");
    out << p.config.to_map().to_text();
  }
  save_riemann_state(p.features, dir / "features.bin");
  save_associative_memory(p.memory, dir / "am.bin");
  if (p.learned) {
    save_learned_model(*p.learned, dir / "learned.bin",
                       p.config.float8_weights ? WeightFormat::float8 : WeightFormat::float32);
  }
}

Pipeline load_pipeline(const std::filesystem::path& dir) {
  if (!std::filesystem::is_regular_file(dir / "config.txt")) {
    throw DataError("'" + dir.string() + "' is not a model directory (no config.txt)");
  }
  Pipeline p;
  p.config = ExperimentConfig::from_map(ConfigMap::from_file(dir / "config.txt"));
  p.features = load_riemann_state(dir / "features.bin");
  p.memory = load_associative_memory(dir / "am.bin");
  if (p.features.whiteners.empty()) throw DataError("model has no bands");
  const auto n_channels = static_cast<std::size_t>(p.features.whiteners.front().rows());
  const std::size_t dim = p.config.resolved_dim(n_channels);
  p.filters = design_filterbank(FilterBankConfig{p.features.bands}, p.features.fs);
  p.bands = band_item_memory(p.features.n_bands(), dim, p.config.item_memory_seed());
  if (p.config.embedding == EmbeddingKind::learned) {
    p.learned = load_learned_model(dir / "learned.bin");
    if (p.learned->band_vectors.size() != p.bands.size() || p.learned->dim() != dim) {
      throw DataError("learned model does not match the configuration");
    }
    p.embedder = std::make_shared<DenseProjectionEmbedder<double>>(export_model(*p.learned).projection);
  } else {
    p.embedder = make_embedder(p.config, riemann_feature_count(n_channels), dim);
  }
  if (p.memory.dim() != dim) throw DataError("associative memory dimension does not match the configuration");
  return p;
}

BenchmarkReport benchmark(const ExperimentConfig& cfg_in, const TrialDataset& ds, std::size_t repeats) {
  if (repeats == 0) throw InvalidArgument("benchmark: repeats must be at least 1");
  ExperimentConfig cfg = cfg_in;
  cfg.threads = 1;
  check_compatible(cfg, ds);
  const auto folds = make_folds(ds, cfg.folds, cfg.by_session, cfg.fold_seed());
  const auto& fold = folds.front();

  std::vector<double> features, embedding, am, inference;
  for (std::size_t r = 0; r <= repeats; ++r) {
    StageTimes t;
    const Pipeline p = fit_pipeline(cfg, ds, fold.train, 0, &t);
    predict(p, ds, fold.test, &t);
    if (r == 0) continue;  // warm-up
    const auto n_train = static_cast<double>(fold.train.size());
    features.push_back(1e6 * t.fit_features / n_train);
    embedding.push_back(1e6 * t.train_embedding / n_train);
    am.push_back(1e6 * t.train_am / n_train);
    inference.push_back(1e6 * t.inference_per_trial);
  }
  BenchmarkReport report;
  report.config = cfg.to_map();
  report.repeats = repeats;
  report.train_trials = fold.train.size();
  report.test_trials = fold.test.size();
  const auto row = [&](const char* name, const std::vector<double>& v) {
    const auto [mean, sd] = mean_std(v);
    report.rows.push_back({name, mean, sd});
  };
  row("fit_features", features);
  row("train_embedding", embedding);
  row("train_am", am);
  row("inference", inference);
  return report;
}

}  // namespace hdemb
