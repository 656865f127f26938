// Command-line driver: synth, train, eval, run, benchmark, footprint.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdemb/config.hpp"
#include "hdemb/dataset.hpp"
#include "hdemb/errors.hpp"
#include "hdemb/experiment.hpp"
#include "hdemb/report.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kDataError = 3, kNumericError = 4 };

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--set", o.overrides, "override one key (key=value), repeatable");
  cmd->add_option("--seed", o.seed, "global seed");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--out", o.out, "output path");
}

hdemb::ExperimentConfig resolve(const CommonOptions& o) {
  hdemb::ConfigMap map;
  if (!o.config_path.empty()) map = hdemb::ConfigMap::from_file(o.config_path);
  for (const auto& kv : o.overrides) map.set(kv);
  if (o.seed) map.set("seed", std::to_string(*o.seed));
  if (o.threads) map.set("threads", std::to_string(*o.threads));
  return hdemb::ExperimentConfig::from_map(map);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw hdemb::DataError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_synth(const CommonOptions& o) {
  auto cfg = resolve(o);
  if (o.out.empty()) throw hdemb::ConfigError("synth needs --out FILE");
  const auto ds = hdemb::generate_synthetic(cfg.synth.to_spec(), cfg.threads);
  hdemb::save_dataset(ds, o.out);
  std::cout << "wrote " << ds.size() << " trials (" << ds.channels() << " channels x " << ds.length()
            << " samples, " << ds.n_classes << " classes) to " << o.out << "\n";
  return kOk;
}

int cmd_train(const CommonOptions& o) {
  auto cfg = resolve(o);
  if (o.out.empty()) throw hdemb::ConfigError("train needs --out DIR");
  const auto ds = hdemb::load_experiment_data(cfg);
  hdemb::check_compatible(cfg, ds);
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  hdemb::StageTimes times;
  const auto p = hdemb::fit_pipeline(cfg, ds, all, 0, &times);
  hdemb::save_pipeline(p, o.out);
  const auto pred = hdemb::predict(p, ds, all);
  std::cout << "trained on " << ds.size() << " trials, training accuracy "
            << hdemb::accuracy(pred, ds.labels) << "%, model in " << o.out << "\n";
  return kOk;
}

int cmd_eval(const CommonOptions& o, const std::string& model_dir) {
  auto p = hdemb::load_pipeline(model_dir);
  // Data selection may be overridden; everything else comes from the model.
  hdemb::ExperimentConfig data_cfg = p.config;
  if (!o.config_path.empty() || !o.overrides.empty()) {
    const auto requested = resolve(o);
    data_cfg.data_path = requested.data_path;
    data_cfg.csv_fs = requested.csv_fs;
    data_cfg.synth = requested.synth;
  }
  const auto ds = hdemb::load_experiment_data(data_cfg);
  if (ds.channels() != static_cast<std::size_t>(p.features.whiteners.front().rows())) {
    throw hdemb::DataError("dataset channel count does not match the model");
  }
  std::vector<std::size_t> all(ds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto pred = hdemb::predict(p, ds, all);
  const double acc = hdemb::accuracy(pred, ds.labels);
  const auto confusion = hdemb::confusion_matrix(pred, ds.labels, ds.n_classes);
  std::cout << "accuracy " << acc << "% on " << ds.size() << " trials\n";
  std::cout << "confusion (rows true, columns predicted)\n" << confusion << "\n";
  return kOk;
}

int cmd_run(const CommonOptions& o) {
  auto cfg = resolve(o);
  const auto ds = hdemb::load_experiment_data(cfg);
  const auto report = hdemb::run_experiment(cfg, ds);
  if (!o.out.empty()) hdemb::write_report(report, o.out);
  std::cout << hdemb::report_summary(report);
  return kOk;
}

int cmd_benchmark(const CommonOptions& o, std::size_t repeats) {
  auto cfg = resolve(o);
  const auto ds = hdemb::load_experiment_data(cfg);
  const auto report = hdemb::benchmark(cfg, ds, repeats);
  if (!o.out.empty()) {
    write_file(std::filesystem::path(o.out) / "benchmark.json", hdemb::benchmark_json(report));
    write_file(std::filesystem::path(o.out) / "benchmark.txt", hdemb::benchmark_summary(report));
  }
  std::cout << hdemb::benchmark_summary(report);
  return kOk;
}

int cmd_footprint(const CommonOptions& o, std::size_t channels, std::size_t classes) {
  auto cfg = resolve(o);
  if (channels == 0) channels = cfg.synth.n_channels;
  if (classes == 0) classes = cfg.synth.n_classes;
  const auto params = hdemb::footprint_params(cfg, channels, classes);
  const auto bits = hdemb::footprint_bits(params);
  if (!o.out.empty()) write_file(o.out, hdemb::footprint_json(params, bits));
  std::cout << hdemb::footprint_summary(params, bits);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperdimensional embeddings for multichannel trial classification"};
  app.require_subcommand(1);

  CommonOptions synth_o, train_o, eval_o, run_o, bench_o, foot_o;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset file");
  add_common(synth, synth_o);
  auto* train = app.add_subcommand("train", "fit a model on a whole dataset and save it");
  add_common(train, train_o);
  auto* eval = app.add_subcommand("eval", "evaluate a saved model");
  add_common(eval, eval_o);
  std::string model_dir;
  eval->add_option("--model", model_dir, "model directory written by train")->required();
  auto* run = app.add_subcommand("run", "cross-validated experiment with report");
  add_common(run, run_o);
  auto* bench = app.add_subcommand("benchmark", "per-trial wall-clock timings");
  add_common(bench, bench_o);
  std::size_t repeats = 10;
  bench->add_option("--repeats", repeats, "timed repetitions after one warm-up")->check(CLI::PositiveNumber);
  auto* foot = app.add_subcommand("footprint", "memory footprint in bits");
  add_common(foot, foot_o);
  std::size_t channels = 0, classes = 0;
  foot->add_option("--channels", channels, "channel count (default: synth.channels)");
  foot->add_option("--classes", classes, "class count (default: synth.classes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*synth) return cmd_synth(synth_o);
    if (*train) return cmd_train(train_o);
    if (*eval) return cmd_eval(eval_o, model_dir);
    if (*run) return cmd_run(run_o);
    if (*bench) return cmd_benchmark(bench_o, repeats);
    if (*foot) return cmd_footprint(foot_o, channels, classes);
  } catch (const hdemb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hdemb::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hdemb::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const hdemb::InvalidState& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const hdemb::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
