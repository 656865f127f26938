#include "hdemb/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hdemb/errors.hpp"

namespace hdemb {

using nlohmann::ordered_json;

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw InvalidArgument("accuracy: need equal, non-empty prediction and label lists");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i] ? 1 : 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(labels.size());
}

Eigen::MatrixXi confusion_matrix(std::span<const int> predictions, std::span<const int> labels,
                                 std::size_t n_classes) {
  if (predictions.size() != labels.size()) throw InvalidArgument("confusion_matrix: length mismatch");
  const auto n = static_cast<Eigen::Index>(n_classes);
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > n || predictions[i] < 1 || predictions[i] > n) {
      throw InvalidArgument("confusion_matrix: label out of range");
    }
    ++m(labels[i] - 1, predictions[i] - 1);
  }
  return m;
}

Footprint footprint_bits(const FootprintParams& p) {
  const std::uint64_t d = p.dim;
  const std::uint64_t n_r = p.n_features;
  Footprint f;
  f.associative_memory = static_cast<std::uint64_t>(p.n_classes) * p.prototypes_per_class * d;
  f.encoder = d;
  switch (p.kind) {
    case EmbeddingKind::thermometer:
    case EmbeddingKind::gray2: f.embedding = 0; break;
    case EmbeddingKind::random_projection: f.embedding = 2 * n_r * d; break;
    case EmbeddingKind::learned: f.embedding = 8 * n_r * d; break;
  }
  f.svm_reference = 64 * static_cast<std::uint64_t>(p.n_classes) * n_r * p.n_bands;
  return f;
}

std::pair<double, double> mean_std(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

namespace {

ordered_json matrix_json(const Eigen::MatrixXi& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json footprint_object(const Footprint& f) {
  return ordered_json{{"associative_memory", f.associative_memory},
                      {"encoder", f.encoder},
                      {"embedding", f.embedding},
                      {"total", f.total()},
                      {"svm_reference", f.svm_reference}};
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

void append_matrix(std::ostringstream& os, const Eigen::MatrixXi& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << pad(std::to_string(m(i, j)), 6, true);
    os << "\n";
  }
}

void append_matrix(std::ostringstream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << pad(fixed(m(i, j), 3), 7, true);
    os << "\n";
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::string report_json(const RunReport& r) {
  ordered_json j;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config.values()) cfg[k] = v;
  j["config"] = cfg;
  ordered_json bands = ordered_json::array();
  for (const auto& b : r.bands) bands.push_back({b.low, b.high});
  j["bands"] = bands;
  j["n_classes"] = r.n_classes;
  j["n_channels"] = r.n_channels;
  j["n_features"] = r.n_features;
  j["dim"] = r.dim;
  j["mean_accuracy"] = r.mean_accuracy;
  j["std_accuracy"] = r.std_accuracy;
  j["confusion"] = matrix_json(r.confusion);
  j["footprint_bits"] = footprint_object(r.footprint);
  ordered_json folds = ordered_json::array();
  for (const auto& f : r.folds) {
    folds.push_back(ordered_json{{"accuracy", f.accuracy},
                                 {"test_indices", f.test_indices},
                                 {"predictions", f.predictions},
                                 {"labels", f.labels},
                                 {"confusion", matrix_json(f.confusion)},
                                 {"prototype_similarity", matrix_json(f.prototype_similarity)}});
  }
  j["folds"] = folds;
  return j.dump(2) + "\n";
}

std::string timings_json(const RunReport& r) {
  ordered_json folds = ordered_json::array();
  for (const auto& f : r.folds) {
    folds.push_back(ordered_json{{"fit_features_s", f.times.fit_features},
                                 {"train_embedding_s", f.times.train_embedding},
                                 {"train_am_s", f.times.train_am},
                                 {"inference_per_trial_s", f.times.inference_per_trial}});
  }
  return ordered_json{{"folds", folds}}.dump(2) + "\n";
}

std::string report_summary(const RunReport& r) {
  std::ostringstream os;
  os << "embedding  " << r.config.get("embedding.kind").value_or("?") << "\n";
  os << "d          " << r.dim << "\n";
  os << "n_R        " << r.n_features << "\n";
  os << "bands      " << r.bands.size() << "\n\n";
  os << pad("fold", 6) << pad("accuracy", 10, true) << "\n";
  for (std::size_t i = 0; i < r.folds.size(); ++i) {
    os << pad(std::to_string(i), 6) << pad(fixed(r.folds[i].accuracy, 2), 10, true) << "\n";
  }
  os << pad("mean", 6) << pad(fixed(r.mean_accuracy, 2), 10, true) << "\n";
  os << pad("std", 6) << pad(fixed(r.std_accuracy, 2), 10, true) << "\n\n";
  os << "confusion (rows true, columns predicted)\n";
  append_matrix(os, r.confusion);
  if (!r.folds.empty()) {
    os << "\nprototype distances (fold 0)\n";
    append_matrix(os, r.folds.front().prototype_similarity);
  }
  os << "\nfootprint bits\n";
  os << "  " << pad("associative memory", 20) << pad(std::to_string(r.footprint.associative_memory), 14, true) << "\n";
  os << "  " << pad("encoder", 20) << pad(std::to_string(r.footprint.encoder), 14, true) << "\n";
  os << "  " << pad("embedding", 20) << pad(std::to_string(r.footprint.embedding), 14, true) << "\n";
  os << "  " << pad("total", 20) << pad(std::to_string(r.footprint.total()), 14, true) << "\n";
  os << "  " << pad("svm (reference)", 20) << pad(std::to_string(r.footprint.svm_reference), 14, true) << "\n";
  return os.str();
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report_json(report));
  write_text(dir / "timings.json", timings_json(report));
  write_text(dir / "summary.txt", report_summary(report));
}

std::string benchmark_json(const BenchmarkReport& r) {
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config.values()) cfg[k] = v;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back(ordered_json{{"stage", row.stage}, {"mean_us_per_trial", row.mean_us}, {"std_us_per_trial", row.std_us}});
  }
  return ordered_json{{"config", cfg},
                      {"repeats", r.repeats},
                      {"train_trials", r.train_trials},
                      {"test_trials", r.test_trials},
                      {"timings", rows}}
             .dump(2) +
         "\n";
}

std::string benchmark_summary(const BenchmarkReport& r) {
  std::ostringstream os;
  os << "repeats " << r.repeats << ", " << r.train_trials << " train / " << r.test_trials << " test trials\n\n";
  os << pad("stage", 18) << pad("mean us/trial", 16, true) << pad("std", 12, true) << "\n";
  for (const auto& row : r.rows) {
    os << pad(row.stage, 18) << pad(fixed(row.mean_us, 2), 16, true) << pad(fixed(row.std_us, 2), 12, true) << "\n";
  }
  return os.str();
}

std::string footprint_json(const FootprintParams& p, const Footprint& f) {
  return ordered_json{{"embedding", to_string(p.kind)},
                      {"n_classes", p.n_classes},
                      {"dim", p.dim},
                      {"n_features", p.n_features},
                      {"n_bands", p.n_bands},
                      {"prototypes_per_class", p.prototypes_per_class},
                      {"bits", footprint_object(f)}}
             .dump(2) +
         "\n";
}

std::string footprint_summary(const FootprintParams& p, const Footprint& f) {
  std::ostringstream os;
  os << to_string(p.kind) << ", n_cl " << p.n_classes << ", d " << p.dim << ", n_R " << p.n_features << ", n_b "
     << p.n_bands << "\n\n";
  os << pad("component", 20) << pad("bits", 14, true) << "\n";
  os << pad("associative memory", 20) << pad(std::to_string(f.associative_memory), 14, true) << "\n";
  os << pad("encoder", 20) << pad(std::to_string(f.encoder), 14, true) << "\n";
  os << pad("embedding", 20) << pad(std::to_string(f.embedding), 14, true) << "\n";
  os << pad("total", 20) << pad(std::to_string(f.total()), 14, true) << "\n";
  os << pad("svm (reference)", 20) << pad(std::to_string(f.svm_reference), 14, true) << "\n";
  return os.str();
}

}  // namespace hdemb
