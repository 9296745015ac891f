#include "cpath/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "cpath/errors.hpp"

namespace cpath {

Dataset::Dataset(std::vector<std::string> columns, std::vector<double> values)
    : columns_(std::move(columns)), values_(std::move(values)) {
  p_ = columns_.size();
  if (p_ == 0) throw ConfigError("dataset", "at least one feature column required");
  if (values_.empty() || values_.size() % p_ != 0)
    throw ConfigError("dataset", "value buffer is not a nonempty multiple of the column count");
  n_ = values_.size() / p_;

  std::set<std::string> seen;
  for (const auto& name : columns_) {
    if (name.empty()) throw ConfigError("dataset", "empty column name");
    if (!seen.insert(name).second) throw ConfigError("dataset", "duplicate column name '" + name + "'");
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("dataset", "non-finite value");
}

std::optional<std::size_t> Dataset::column_index(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

void Dataset::permute_column_in_place(std::size_t col, Rng& rng) {
  if (col >= p_) throw ConfigError("permute", "feature index out of range");
  for (std::size_t i = n_; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(values_[(i - 1) * p_ + col], values_[j * p_ + col]);
  }
}

Dataset permute_column(const Dataset& data, std::size_t col, Rng& rng) {
  Dataset out = data;
  out.permute_column_in_place(col, rng);
  return out;
}

LabelVector::LabelVector(std::vector<int> labels, int n_classes)
    : labels_(std::move(labels)), n_classes_(n_classes) {
  if (n_classes_ < 2) throw ConfigError("labels", "at least two classes required");
  if (labels_.empty()) throw ConfigError("labels", "empty label vector");
  for (int label : labels_)
    if (label < 1 || label > n_classes_)
      throw ConfigError("labels", "label " + std::to_string(label) + " outside {1,...," +
                                      std::to_string(n_classes_) + "}");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    throw ConfigError("load-csv", "non-numeric cell '" + cell + "' on line " + std::to_string(line_no));
  }
  // Allow trailing whitespace only.
  for (std::size_t i = consumed; i < cell.size(); ++i)
    if (!std::isspace(static_cast<unsigned char>(cell[i])))
      throw ConfigError("load-csv", "non-numeric cell '" + cell + "' on line " + std::to_string(line_no));
  if (!std::isfinite(value))
    throw ConfigError("load-csv", "non-finite value on line " + std::to_string(line_no));
  return value;
}

}  // namespace

LoadedCsv load_csv(const std::string& path, bool has_header,
                   const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load-csv", "cannot open '" + path + "'");

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ConfigError("load-csv", "'" + path + "' is empty");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  const std::size_t width = split_line(lines[0]).size();
  if (has_header) {
    names = split_line(lines[0]);
    first_data = 1;
    if (lines.size() == 1) throw ConfigError("load-csv", "'" + path + "' has a header but no rows");
  } else {
    for (std::size_t j = 0; j < width; ++j) names.push_back("x" + std::to_string(j + 1));
  }

  std::optional<std::size_t> label_idx;
  if (label_column) {
    auto it = std::find(names.begin(), names.end(), *label_column);
    if (it == names.end())
      throw ConfigError("load-csv", "label column '" + *label_column + "' not found");
    label_idx = static_cast<std::size_t>(it - names.begin());
  }

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < names.size(); ++j)
    if (!label_idx || j != *label_idx) feature_names.push_back(names[j]);
  if (feature_names.empty()) throw ConfigError("load-csv", "no feature columns left");

  std::vector<double> values;
  std::vector<double> raw_labels;
  values.reserve((lines.size() - first_data) * feature_names.size());
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    const auto cells = split_line(lines[r]);
    if (cells.size() != names.size())
      throw ConfigError("load-csv", "ragged row on line " + std::to_string(r + 1) + " (" +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(names.size()) + ")");
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const double v = parse_cell(cells[j], r + 1);
      if (label_idx && j == *label_idx)
        raw_labels.push_back(v);
      else
        values.push_back(v);
    }
  }

  LoadedCsv out{Dataset(std::move(feature_names), std::move(values)), std::nullopt};

  if (label_idx) {
    // Remap integer codes to contiguous {1,...,g}, sorted by original code.
    std::map<long long, int> remap;
    for (double v : raw_labels) {
      if (v != std::floor(v))
        throw ConfigError("load-csv", "label column holds non-integer value");
      remap[static_cast<long long>(v)] = 0;
    }
    int next_id = 1;
    for (auto& [code, id] : remap) id = next_id++;
    std::vector<int> labels;
    labels.reserve(raw_labels.size());
    for (double v : raw_labels) labels.push_back(remap[static_cast<long long>(v)]);
    out.labels = LabelVector(std::move(labels), static_cast<int>(remap.size()));
  }
  return out;
}

void write_csv(const std::string& path, const Dataset& data, const LabelVector* labels,
               const std::string& label_name) {
  if (labels && labels->size() != data.rows())
    throw ConfigError("write-csv", "label length does not match row count");
  std::ofstream out(path);
  if (!out) throw ConfigError("write-csv", "cannot open '" + path + "' for writing");

  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (j > 0) out << ',';
    out << data.columns()[j];
  }
  if (labels) out << ',' << label_name;
  out << '\n';

  char buf[64];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j > 0) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", data.at(i, j));
      out << buf;
    }
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
  if (!out) throw ConfigError("write-csv", "write to '" + path + "' failed");
}

}  // namespace cpath
