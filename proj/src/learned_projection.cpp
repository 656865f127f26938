#include "hdemb/learned_projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "binary_io.hpp"
#include "hdemb/errors.hpp"

namespace hdemb {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

Eigen::VectorXd target_vector(const Hypervector& t) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.dim()));
  for (std::size_t i = 0; i < t.dim(); ++i) v[static_cast<Eigen::Index>(i)] = t[i] ? 1.0 : 0.0;
  return v;
}

void check_shape(const LearnedModel& model, const BandedFeatures& banded) {
  if (static_cast<std::size_t>(banded.rows()) != model.n_features() ||
      static_cast<std::size_t>(banded.cols()) != model.n_bands()) {
    throw InvalidArgument("learned projection: expected features " + std::to_string(model.n_features()) + " x " +
                          std::to_string(model.n_bands()) + ", got " + std::to_string(banded.rows()) + " x " +
                          std::to_string(banded.cols()));
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("train: learning rate must be positive");
  if (batch_size == 0) throw InvalidArgument("train: batch size must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("train: momentum must lie in [0, 1)");
}

Eigen::MatrixXd bipolar_band_signs(const ItemMemory& band_memory) {
  const auto d = static_cast<Eigen::Index>(band_memory.dim());
  Eigen::MatrixXd signs(d, static_cast<Eigen::Index>(band_memory.size()));
  for (std::size_t b = 0; b < band_memory.size(); ++b) {
    const auto& c = band_memory[b];
    for (Eigen::Index j = 0; j < d; ++j) signs(j, static_cast<Eigen::Index>(b)) = c[static_cast<std::size_t>(j)] ? -1.0 : 1.0;
  }
  return signs;
}

LearnedModel init_model(std::size_t n_features, std::size_t dim, std::size_t n_classes, std::size_t n_bands,
                        const ItemMemory& band_memory, const TrainConfig& cfg) {
  cfg.validate();
  if (n_features == 0 || dim == 0 || n_classes == 0 || n_bands == 0) {
    throw InvalidArgument("init_model: all sizes must be positive");
  }
  if (band_memory.size() != n_bands || band_memory.dim() != dim) {
    throw InvalidArgument("init_model: item memory holds " + std::to_string(band_memory.size()) + " vectors of dim " +
                          std::to_string(band_memory.dim()) + ", expected " + std::to_string(n_bands) + " of dim " +
                          std::to_string(dim));
  }
  LearnedModel m;
  m.hyper = cfg;
  m.item_memory_seed = band_memory.seed();
  const double scale = cfg.init_scale > 0.0 ? cfg.init_scale : 1.0 / std::sqrt(static_cast<double>(n_features));
  Rng weight_rng(derive_seed(cfg.seed, stream::kLearned, 0));
  m.weights.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n_features));
  for (Eigen::Index j = 0; j < m.weights.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.weights.rows(); ++i) m.weights(i, j) = weight_rng.uniform(-scale, scale);
  }
  Rng target_rng(derive_seed(cfg.seed, stream::kLearned, 1));
  for (std::size_t c = 0; c < n_classes; ++c) m.targets.push_back(random_hv(dim, target_rng));
  for (std::size_t b = 0; b < n_bands; ++b) m.band_vectors.push_back(band_memory[b]);
  m.band_signs = bipolar_band_signs(band_memory);
  return m;
}

ForwardPass forward(const LearnedModel& model, const BandedFeatures& banded, Discretization mode) {
  check_shape(model, banded);
  const DenseProjection<double> projection(model.weights);
  ForwardPass pass;
  pass.preactivations.resize(model.weights.rows(), banded.cols());
  for (Eigen::Index b = 0; b < banded.cols(); ++b) {
    pass.preactivations.col(b) = projection.preactivation(banded.col(b));
  }
  Eigen::MatrixXd discrete = mode == Discretization::hard
                                 ? Eigen::MatrixXd(pass.preactivations.unaryExpr([](double r) { return r >= 0.0 ? 1.0 : -1.0; }))
                                 : pass.preactivations;
  pass.logits = discrete.cwiseProduct(model.band_signs).rowwise().sum();
  pass.output = pass.logits.unaryExpr([](double z) { return sigmoid(z); });
  return pass;
}

Hypervector hard_output(const ForwardPass& pass) {
  Hypervector out(static_cast<std::size_t>(pass.output.size()));
  for (Eigen::Index j = 0; j < pass.output.size(); ++j) {
    if (pass.output[j] >= 0.5) out.set(static_cast<std::size_t>(j), true);
  }
  return out;
}

double bce_loss(const Eigen::VectorXd& s, const Hypervector& target) {
  if (static_cast<std::size_t>(s.size()) != target.dim()) throw InvalidArgument("bce_loss: dimension mismatch");
  constexpr double kEps = 1e-12;
  double total = 0.0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    const double p = std::clamp(s[j], kEps, 1.0 - kEps);
    total -= target[static_cast<std::size_t>(j)] ? std::log(p) : std::log(1.0 - p);
  }
  return total / static_cast<double>(s.size());
}

double bce_with_logits(const Eigen::VectorXd& z, const Hypervector& target) {
  if (static_cast<std::size_t>(z.size()) != target.dim()) throw InvalidArgument("bce_with_logits: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    // -[t log s(z) + (1-t) log(1-s(z))] = softplus(z) - t z
    total += softplus(z[j]) - (target[static_cast<std::size_t>(j)] ? z[j] : 0.0);
  }
  return total / static_cast<double>(z.size());
}

Eigen::MatrixXd backward_ste(const LearnedModel& model, const BandedFeatures& banded, const ForwardPass& pass,
                             const Eigen::VectorXd& grad_at_output, Discretization mode) {
  check_shape(model, banded);
  if (grad_at_output.size() != model.weights.rows()) throw InvalidArgument("backward_ste: gradient size mismatch");
  // dS/dz = S (1 - S)
  const Eigen::VectorXd grad_logits =
      grad_at_output.cwiseProduct(pass.output.cwiseProduct((1.0 - pass.output.array()).matrix()));
  Eigen::MatrixXd grad_pre = model.band_signs.array().colwise() * grad_logits.array();
  if (mode == Discretization::hard) {
    grad_pre = grad_pre.binaryExpr(pass.preactivations, [](double g, double r) { return ste_gradient(r, g); });
  }
  return grad_pre * banded.transpose();
}

double dataset_loss(const LearnedModel& model, std::span<const LabeledFeatures> dataset) {
  if (dataset.empty()) return 0.0;
  double total = 0.0;
  for (const auto& sample : dataset) {
    const auto pass = forward(model, sample.features);
    total += bce_with_logits(pass.logits, model.targets.at(static_cast<std::size_t>(sample.label - 1)));
  }
  return total / static_cast<double>(dataset.size());
}

LearnedModel train(LearnedModel model, std::span<const LabeledFeatures> dataset, const TrainConfig& cfg,
                   TrainHistory* history) {
  cfg.validate();
  if (dataset.empty()) throw InvalidArgument("train: empty dataset");
  for (const auto& sample : dataset) {
    check_shape(model, sample.features);
    if (sample.label < 1 || static_cast<std::size_t>(sample.label) > model.n_classes()) {
      throw InvalidArgument("train: label " + std::to_string(sample.label) + " outside 1.." +
                            std::to_string(model.n_classes()));
    }
  }
  model.hyper = cfg;

  std::vector<Eigen::VectorXd> targets;
  for (const auto& t : model.targets) targets.push_back(target_vector(t));

  if (history != nullptr) {
    history->initial_loss = dataset_loss(model, dataset);
    history->epoch_loss.clear();
  }

  const auto d = model.weights.rows();
  const auto n_features = model.weights.cols();
  const auto n_bands = static_cast<Eigen::Index>(model.n_bands());
  Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(d, n_features);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(derive_seed(cfg.seed, stream::kLearned, 2));

  Eigen::MatrixXd batch_features;
  Eigen::MatrixXd batch_grad;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng.below(i))]);
    }
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, order.size() - start);
      const auto cols = static_cast<Eigen::Index>(count) * n_bands;
      batch_features.resize(n_features, cols);
      for (std::size_t s = 0; s < count; ++s) {
        batch_features.middleCols(static_cast<Eigen::Index>(s) * n_bands, n_bands) = dataset[order[start + s]].features;
      }
      // All samples and bands of the batch in one product.
      const Eigen::MatrixXd pre = model.weights * batch_features;
      batch_grad.resize(d, cols);
      for (std::size_t s = 0; s < count; ++s) {
        const auto block = pre.middleCols(static_cast<Eigen::Index>(s) * n_bands, n_bands);
        const Eigen::VectorXd z =
            block.unaryExpr([](double r) { return r >= 0.0 ? 1.0 : -1.0; }).cwiseProduct(model.band_signs).rowwise().sum();
        const auto& t = targets[static_cast<std::size_t>(dataset[order[start + s]].label - 1)];
        // d(sum_j BCE_j)/dz = S - t
        const Eigen::VectorXd grad_z = z.unaryExpr([](double v) { return sigmoid(v); }) - t;
        batch_grad.middleCols(static_cast<Eigen::Index>(s) * n_bands, n_bands) =
            (model.band_signs.array().colwise() * grad_z.array())
                .matrix()
                .binaryExpr(block, [](double g, double r) { return ste_gradient(r, g); });
      }
      const Eigen::MatrixXd grad = (batch_grad * batch_features.transpose()) / static_cast<double>(count);
      velocity = cfg.momentum * velocity - cfg.learning_rate * grad;
      model.weights += velocity;
    }
    if (history != nullptr) history->epoch_loss.push_back(dataset_loss(model, dataset));
  }
  return model;
}

ExportedModel export_model(const LearnedModel& model, bool float8_weights) {
  DenseProjection<double> projection(model.weights);
  if (float8_weights) projection = projection.quantized_float8();
  std::vector<std::uint64_t> counts(model.targets.size(), 0);
  return ExportedModel{std::move(projection),
                       AssociativeMemory(model.targets.size(), 1, model.targets, std::move(counts))};
}

namespace {
constexpr char kLearnedMagic[5] = "HDLP";
constexpr std::uint16_t kLearnedVersion = 1;
}  // namespace

void save_learned_model(const LearnedModel& model, const std::filesystem::path& path, WeightFormat format) {
  io::Writer out;
  io::put_header(out, kLearnedMagic, kLearnedVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(model.dim()));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(model.n_features()));
  out.put<std::uint16_t>(static_cast<std::uint16_t>(model.n_classes()));
  out.put<std::uint16_t>(static_cast<std::uint16_t>(model.n_bands()));
  out.put<std::uint64_t>(model.hyper.seed.value);
  out.put<std::uint64_t>(model.item_memory_seed.value);
  out.put<std::uint8_t>(static_cast<std::uint8_t>(format));
  if (format == WeightFormat::float32) {
    out.put<float>(1.0F);
    for (Eigen::Index i = 0; i < model.weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < model.weights.cols(); ++j) out.put<float>(static_cast<float>(model.weights(i, j)));
    }
  } else {
    const double peak = model.weights.cwiseAbs().maxCoeff();
    const double scale = peak > 0.0 ? float8::kMax / peak : 1.0;
    out.put<float>(static_cast<float>(scale));
    for (Eigen::Index i = 0; i < model.weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < model.weights.cols(); ++j) {
        out.put<std::uint8_t>(float8::encode(model.weights(i, j) * static_cast<float>(scale)));
      }
    }
  }
  for (const auto& t : model.targets) io::put_hypervector(out, t);
  for (const auto& c : model.band_vectors) io::put_hypervector(out, c);
  out.write_file(path);
}

LearnedModel load_learned_model(const std::filesystem::path& path) {
  auto in = io::Reader::from_file(path);
  io::expect_header(in, kLearnedMagic, kLearnedVersion);
  const auto d = in.get<std::uint32_t>("d");
  const auto n_features = in.get<std::uint32_t>("n_R");
  const auto n_classes = in.get<std::uint16_t>("n_cl");
  const auto n_bands = in.get<std::uint16_t>("n_b");
  LearnedModel m;
  m.hyper.seed = RngSeed{in.get<std::uint64_t>("seed")};
  m.item_memory_seed = RngSeed{in.get<std::uint64_t>("im seed")};
  const std::size_t format_at = in.offset();
  const auto format = in.get<std::uint8_t>("weight format");
  const auto scale = static_cast<double>(in.get<float>("weight scale"));
  if (format > 1) throw FormatError("unknown weight format " + std::to_string(format), format_at);
  if (d == 0 || n_features == 0 || n_classes == 0 || n_bands == 0) throw FormatError("empty model header", 6);
  m.weights.resize(d, n_features);
  for (Eigen::Index i = 0; i < m.weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.weights.cols(); ++j) {
      m.weights(i, j) = format == 0 ? static_cast<double>(in.get<float>("weights"))
                                    : float8::decode(in.get<std::uint8_t>("weights")) / scale;
    }
  }
  for (std::size_t c = 0; c < n_classes; ++c) m.targets.push_back(io::get_hypervector(in, d, "targets"));
  ItemMemory bands;
  for (std::size_t b = 0; b < n_bands; ++b) {
    m.band_vectors.push_back(io::get_hypervector(in, d, "band vectors"));
    bands.add(std::to_string(b), m.band_vectors.back());
  }
  m.band_signs = bipolar_band_signs(bands);
  return m;
}

}  // namespace hdemb
