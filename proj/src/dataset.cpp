#include "hdemb/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "binary_io.hpp"
#include "hdemb/errors.hpp"

namespace hdemb {

void TrialDataset::validate() const {
  if (trials.size() != labels.size() || trials.size() != sessions.size()) {
    throw DataError("dataset: " + std::to_string(trials.size()) + " trials, " + std::to_string(labels.size()) +
                    " labels, " + std::to_string(sessions.size()) + " sessions");
  }
  if (n_classes == 0) throw DataError("dataset: n_classes is zero");
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].fs != fs) throw DataError("dataset: trial " + std::to_string(i) + " has a different sampling rate");
    if (trials[i].channels() != channels() || trials[i].length() != length()) {
      throw DataError("dataset: trial " + std::to_string(i) + " has a different shape");
    }
    if (labels[i] < 1 || static_cast<std::size_t>(labels[i]) > n_classes) {
      throw LabelError("dataset: trial " + std::to_string(i) + " has label " + std::to_string(labels[i]) +
                       " outside 1.." + std::to_string(n_classes));
    }
  }
}

TrialDataset TrialDataset::subset(const std::vector<std::size_t>& indices) const {
  TrialDataset out;
  out.fs = fs;
  out.n_classes = n_classes;
  for (auto i : indices) {
    out.trials.push_back(trials.at(i));
    out.labels.push_back(labels.at(i));
    out.sessions.push_back(sessions.at(i));
  }
  return out;
}

namespace {
constexpr char kDatasetMagic[5] = "HDBC";
constexpr std::uint16_t kDatasetVersion = 1;
}  // namespace

void save_dataset(const TrialDataset& ds, const std::filesystem::path& path) {
  ds.validate();
  io::Writer out;
  io::put_header(out, kDatasetMagic, kDatasetVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(ds.size()));
  out.put<std::uint16_t>(static_cast<std::uint16_t>(ds.channels()));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(ds.length()));
  out.put<float>(static_cast<float>(ds.fs));
  out.put<std::uint16_t>(static_cast<std::uint16_t>(ds.n_classes));
  for (std::size_t t = 0; t < ds.size(); ++t) {
    out.put<std::uint16_t>(ds.sessions[t]);
    out.put<std::uint16_t>(static_cast<std::uint16_t>(ds.labels[t]));
    const auto& x = ds.trials[t].samples;
    for (Eigen::Index c = 0; c < x.rows(); ++c) {
      for (Eigen::Index n = 0; n < x.cols(); ++n) out.put<float>(static_cast<float>(x(c, n)));
    }
  }
  out.write_file(path);
}

TrialDataset load_dataset(const std::filesystem::path& path) {
  auto in = io::Reader::from_file(path);
  io::expect_header(in, kDatasetMagic, kDatasetVersion);
  TrialDataset ds;
  const auto n_trials = in.get<std::uint32_t>("trial count");
  const auto n_ch = in.get<std::uint16_t>("channel count");
  const auto n_s = in.get<std::uint32_t>("sample count");
  ds.fs = static_cast<double>(in.get<float>("sampling rate"));
  ds.n_classes = in.get<std::uint16_t>("class count");
  // Fail fast on a short file before allocating.
  in.require(static_cast<std::size_t>(n_trials) * (4 + std::size_t{n_ch} * n_s * 4), "trial payload");
  for (std::uint32_t t = 0; t < n_trials; ++t) {
    ds.sessions.push_back(in.get<std::uint16_t>("session"));
    const std::size_t label_at = in.offset();
    const auto label = in.get<std::uint16_t>("label");
    if (label < 1 || label > ds.n_classes) {
      throw LabelError("label " + std::to_string(label) + " outside 1.." + std::to_string(ds.n_classes) +
                       " at offset " + std::to_string(label_at));
    }
    ds.labels.push_back(label);
    TrialTensor trial{Eigen::MatrixXd(n_ch, n_s), ds.fs};
    for (Eigen::Index c = 0; c < n_ch; ++c) {
      for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(n_s); ++n) {
        trial.samples(c, n) = static_cast<double>(in.get<float>("samples"));
      }
    }
    ds.trials.push_back(std::move(trial));
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes after last trial", in.offset());
  return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double parse_number(const std::string& cell, const std::filesystem::path& file, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw DataError(file.string() + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  }
}

TrialTensor read_trial_csv(const std::filesystem::path& file, double fs) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(file.string() + ": empty file");
  const std::size_t n_ch = split_csv_line(line).size();
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != n_ch) {
      throw DataError(file.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(n_ch) +
                      " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, file, line_no));
    rows.push_back(std::move(row));
  }
  TrialTensor trial{Eigen::MatrixXd(n_ch, rows.size()), fs};
  for (std::size_t n = 0; n < rows.size(); ++n) {
    for (std::size_t c = 0; c < n_ch; ++c) {
      trial.samples(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(n)) = rows[n][c];
    }
  }
  return trial;
}

}  // namespace

TrialDataset import_csv(const std::filesystem::path& manifest, double fs) {
  std::ifstream in(manifest);
  if (!in) throw DataError("cannot open manifest '" + manifest.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty manifest '" + manifest.string() + "'");
  const auto header = split_csv_line(line);
  const auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("manifest lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t file_col = column("file");
  const std::size_t label_col = column("label");
  const std::size_t session_col = column("session");

  TrialDataset ds;
  ds.fs = fs;
  std::size_t line_no = 1;
  int max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw DataError(manifest.string() + ":" + std::to_string(line_no) + ": wrong column count");
    }
    std::filesystem::path file = cells[file_col];
    if (file.is_relative()) file = manifest.parent_path() / file;
    const auto label = static_cast<int>(parse_number(cells[label_col], manifest, line_no));
    if (label < 1) {
      throw LabelError(manifest.string() + ":" + std::to_string(line_no) + ": label " + std::to_string(label) +
                       " must be >= 1");
    }
    max_label = std::max(max_label, label);
    ds.trials.push_back(read_trial_csv(file, fs));
    ds.labels.push_back(label);
    ds.sessions.push_back(static_cast<std::uint16_t>(parse_number(cells[session_col], manifest, line_no)));
  }
  ds.n_classes = static_cast<std::size_t>(max_label);
  ds.validate();
  return ds;
}

std::vector<Fold> make_folds(const TrialDataset& ds, std::size_t n_folds, bool by_session, RngSeed seed) {
  if (n_folds < 2) throw InvalidArgument("make_folds: need at least 2 folds");
  if (ds.size() < n_folds) throw InvalidArgument("make_folds: fewer trials than folds");
  std::vector<std::size_t> fold_of(ds.size());
  if (by_session) {
    if (ds.sessions.size() != ds.size()) throw InvalidArgument("make_folds: session metadata missing");
    const std::set<std::uint16_t> distinct(ds.sessions.begin(), ds.sessions.end());
    if (distinct.size() < n_folds) {
      throw InvalidArgument("make_folds: " + std::to_string(distinct.size()) + " sessions cannot fill " +
                            std::to_string(n_folds) + " folds");
    }
    std::map<std::uint16_t, std::size_t> fold_of_session;
    std::size_t next = 0;
    for (auto s : distinct) fold_of_session[s] = next++ % n_folds;
    for (std::size_t i = 0; i < ds.size(); ++i) fold_of[i] = fold_of_session[ds.sessions[i]];
  } else {
    Rng rng(derive_seed(seed, stream::kFolds));
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
    // Continue dealing where the previous class stopped so fold sizes stay within one.
    std::size_t next = 0;
    for (auto& [label, members] : by_class) {
      for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
      for (auto idx : members) fold_of[idx] = next++ % n_folds;
    }
  }
  std::vector<Fold> folds(n_folds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t f = 0; f < n_folds; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

}  // namespace hdemb
