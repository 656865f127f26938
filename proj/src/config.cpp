#include "hdemb/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hdemb/errors.hpp"

namespace hdemb {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("config: '" + key + "' has invalid value '" + text + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + text + "'");
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text, const std::string& source) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    map.values_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return map;
}

ConfigMap ConfigMap::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void ConfigMap::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty()) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::optional<std::string> ConfigMap::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string ConfigMap::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

FilterBankConfig parse_bands(const std::string& text) {
  if (text == "3class") return default_bands(DatasetKind::three_class);
  if (text == "4class") return default_bands(DatasetKind::four_class);
  FilterBankConfig cfg;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) throw ConfigError("band '" + item + "' is not low-high");
    cfg.bands.push_back({parse_value<double>("bands", trim(item.substr(0, dash))),
                         parse_value<double>("bands", trim(item.substr(dash + 1)))});
  }
  if (cfg.bands.empty()) throw ConfigError("empty band list");
  return cfg;
}

std::string format_bands(const std::vector<Band>& bands) {
  std::string out;
  for (const auto& b : bands) {
    if (!out.empty()) out += ",";
    out += format_double(b.low) + "-" + format_double(b.high);
  }
  return out;
}

SynthSpec SynthOptions::to_spec() const {
  SynthSpec spec = separable_spec(n_classes, n_channels, bands, baseline, boost, active_channels);
  spec.n_samples = n_samples;
  spec.fs = fs;
  spec.n_sessions = n_sessions;
  spec.trials_per_session = trials_per_session;
  spec.amplitude_jitter = jitter;
  spec.noise_sigma = noise;
  spec.seed = RngSeed{seed};
  return spec;
}

ExperimentConfig ExperimentConfig::from_map(const ConfigMap& map) {
  static const std::set<std::string> kKnown = {
      "data.path", "data.csv_fs", "synth.classes", "synth.channels", "synth.samples", "synth.fs", "synth.sessions",
      "synth.trials_per_session", "synth.bands", "synth.baseline", "synth.boost", "synth.active_channels",
      "synth.jitter", "synth.noise", "synth.seed", "features.bands", "features.alpha", "embedding.kind",
      "embedding.dim", "embedding.q", "embedding.clip_range", "embedding.sparsity", "embedding.float8", "train.lr",
      "train.batch", "train.epochs", "train.momentum", "train.init_scale", "encoder.clip_output", "am.k",
      "am.restarts", "am.max_iters", "am.seeding", "cv.folds", "cv.by_session", "seed", "threads"};
  for (const auto& [key, value] : map.values()) {
    if (kKnown.count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  const auto str = [&](const char* key, std::string& out) {
    if (auto v = map.get(key)) out = *v;
  };
  const auto real = [&](const char* key, double& out) {
    if (auto v = map.get(key)) out = parse_value<double>(key, *v);
  };
  const auto count = [&](const char* key, std::size_t& out) {
    if (auto v = map.get(key)) out = parse_value<std::size_t>(key, *v);
  };
  const auto flag = [&](const char* key, bool& out) {
    if (auto v = map.get(key)) out = parse_bool(key, *v);
  };

  str("data.path", c.data_path);
  real("data.csv_fs", c.csv_fs);
  if (auto v = map.get("seed")) c.seed = parse_value<std::uint64_t>("seed", *v);
  c.synth.seed = c.seed;
  count("synth.classes", c.synth.n_classes);
  count("synth.channels", c.synth.n_channels);
  count("synth.samples", c.synth.n_samples);
  real("synth.fs", c.synth.fs);
  count("synth.sessions", c.synth.n_sessions);
  count("synth.trials_per_session", c.synth.trials_per_session);
  if (auto v = map.get("synth.bands")) c.synth.bands = parse_bands(*v).bands;
  real("synth.baseline", c.synth.baseline);
  real("synth.boost", c.synth.boost);
  count("synth.active_channels", c.synth.active_channels);
  real("synth.jitter", c.synth.jitter);
  real("synth.noise", c.synth.noise);
  if (auto v = map.get("synth.seed")) c.synth.seed = parse_value<std::uint64_t>("synth.seed", *v);

  str("features.bands", c.bands_text);
  real("features.alpha", c.alpha);

  if (auto v = map.get("embedding.kind")) {
    try {
      c.embedding = parse_embedding_kind(*v);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  count("embedding.dim", c.dim);
  count("embedding.q", c.bits_per_feature);
  real("embedding.clip_range", c.clip_range);
  real("embedding.sparsity", c.sparsity);
  flag("embedding.float8", c.float8_weights);

  real("train.lr", c.train.learning_rate);
  count("train.batch", c.train.batch_size);
  count("train.epochs", c.train.epochs);
  real("train.momentum", c.train.momentum);
  real("train.init_scale", c.train.init_scale);
  flag("encoder.clip_output", c.clip_output);

  count("am.k", c.am.k);
  count("am.restarts", c.am.restarts);
  count("am.max_iters", c.am.max_iters);
  if (auto v = map.get("am.seeding")) {
    if (*v == "random") {
      c.am.seeding = Seeding::random;
    } else if (*v == "d2" || *v == "d_squared") {
      c.am.seeding = Seeding::d_squared;
    } else {
      throw ConfigError("am.seeding must be 'random' or 'd2'");
    }
  }
  count("cv.folds", c.folds);
  flag("cv.by_session", c.by_session);
  count("threads", c.threads);
  c.validate();
  return c;
}

ConfigMap ExperimentConfig::to_map() const {
  ConfigMap m;
  m.set("data.path", data_path);
  m.set("data.csv_fs", format_double(csv_fs));
  if (data_path.empty()) {
    m.set("synth.classes", std::to_string(synth.n_classes));
    m.set("synth.channels", std::to_string(synth.n_channels));
    m.set("synth.samples", std::to_string(synth.n_samples));
    m.set("synth.fs", format_double(synth.fs));
    m.set("synth.sessions", std::to_string(synth.n_sessions));
    m.set("synth.trials_per_session", std::to_string(synth.trials_per_session));
    m.set("synth.bands", format_bands(synth.bands));
    m.set("synth.baseline", format_double(synth.baseline));
    m.set("synth.boost", format_double(synth.boost));
    m.set("synth.active_channels", std::to_string(synth.active_channels));
    m.set("synth.jitter", format_double(synth.jitter));
    m.set("synth.noise", format_double(synth.noise));
    m.set("synth.seed", std::to_string(synth.seed));
  }
  m.set("features.bands", bands_text);
  m.set("features.alpha", format_double(alpha));
  m.set("embedding.kind", to_string(embedding));
  m.set("embedding.dim", std::to_string(dim));
  m.set("embedding.q", std::to_string(bits_per_feature));
  m.set("embedding.clip_range", format_double(clip_range));
  m.set("embedding.sparsity", format_double(sparsity));
  m.set("embedding.float8", float8_weights ? "true" : "false");
  m.set("train.lr", format_double(train.learning_rate));
  m.set("train.batch", std::to_string(train.batch_size));
  m.set("train.epochs", std::to_string(train.epochs));
  m.set("train.momentum", format_double(train.momentum));
  m.set("train.init_scale", format_double(train.init_scale));
  m.set("encoder.clip_output", clip_output ? "true" : "false");
  m.set("am.k", std::to_string(am.k));
  m.set("am.restarts", std::to_string(am.restarts));
  m.set("am.max_iters", std::to_string(am.max_iters));
  m.set("am.seeding", am.seeding == Seeding::random ? "random" : "d2");
  m.set("cv.folds", std::to_string(folds));
  m.set("cv.by_session", by_session ? "true" : "false");
  m.set("seed", std::to_string(seed));
  m.set("threads", std::to_string(threads));
  return m;
}

void ExperimentConfig::validate() const {
  try {
    const auto fb = filter_bank();
    if (data_path.empty()) {
      synth.to_spec().validate();
      fb.validate(synth.fs);
    }
    train.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!(alpha >= 0.0)) throw ConfigError("features.alpha must be non-negative");
  if (embedding == EmbeddingKind::thermometer || embedding == EmbeddingKind::gray2) {
    if (bits_per_feature < (embedding == EmbeddingKind::gray2 ? 3U : 1U)) {
      throw ConfigError("embedding.q too small for " + to_string(embedding));
    }
    if (!(clip_range > 0.0)) throw ConfigError("embedding.clip_range must be positive");
  }
  if (embedding == EmbeddingKind::random_projection && !(sparsity > 0.0 && sparsity <= 1.0)) {
    throw ConfigError("embedding.sparsity must lie in (0, 1]");
  }
  if (embedding == EmbeddingKind::learned && am.k != 1) {
    throw ConfigError("am.k must be 1 with learned embeddings (prototypes are the training targets)");
  }
  if (am.k == 0 || am.restarts == 0 || am.max_iters == 0) throw ConfigError("am.k, am.restarts and am.max_iters must be positive");
  if (am.k > 1 && !clip_output) throw ConfigError("k-means prototypes need clipped encoder output");
  if (folds < 2) throw ConfigError("cv.folds must be at least 2");
  if (threads == 0) throw ConfigError("threads must be positive");
}

std::size_t ExperimentConfig::resolved_dim(std::size_t n_channels) const {
  const std::size_t n_r = riemann_feature_count(n_channels);
  if (embedding == EmbeddingKind::thermometer || embedding == EmbeddingKind::gray2) {
    const std::size_t expected = n_r * bits_per_feature;
    if (dim != 0 && dim != expected) {
      throw ConfigError("embedding.dim = " + std::to_string(dim) + " but " + to_string(embedding) + " with q = " +
                        std::to_string(bits_per_feature) + " over " + std::to_string(n_r) + " features gives " +
                        std::to_string(expected));
    }
    return expected;
  }
  return dim == 0 ? 10000 : dim;
}

}  // namespace hdemb
