#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cpath/rng.hpp"

namespace cpath {

/// Immutable n x p numeric feature matrix with named columns.
///
/// Values are stored row-major. Instances are safe to share across threads;
/// perturbation copies (permute_column) or mutates an exclusively owned copy
/// (permute_column_in_place).
class Dataset {
 public:
  Dataset(std::vector<std::string> columns, std::vector<double> values);

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return p_; }

  double at(std::size_t row, std::size_t col) const { return values_[row * p_ + col]; }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }

  std::optional<std::size_t> column_index(const std::string& name) const;

  /// Replaces column j with a uniformly random permutation of itself
  /// (Fisher-Yates on rng). For use on copies the caller owns exclusively.
  void permute_column_in_place(std::size_t col, Rng& rng);

 private:
  std::vector<std::string> columns_;
  std::vector<double> values_;
  std::size_t n_ = 0;
  std::size_t p_ = 0;
};

/// Class labels in {1, ..., n_classes}, paired with a Dataset of equal length.
class LabelVector {
 public:
  LabelVector(std::vector<int> labels, int n_classes);

  const std::vector<int>& labels() const { return labels_; }
  int n_classes() const { return n_classes_; }
  std::size_t size() const { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
  int n_classes_ = 0;
};

struct LoadedCsv {
  Dataset data;
  std::optional<LabelVector> labels;
};

/// Reads a rectangular numeric CSV (RFC-4180 subset: comma-separated, no
/// quoting). Without a header, columns are named x1..xp. If label_column is
/// given, that column must hold integer codes; they are remapped to
/// {1, ..., g} preserving the sorted order of the original codes.
LoadedCsv load_csv(const std::string& path, bool has_header,
                   const std::optional<std::string>& label_column = std::nullopt);

/// Writes the dataset (and optional label column) with 17 significant digits
/// so that load_csv(write_csv(d)) round-trips exactly.
void write_csv(const std::string& path, const Dataset& data,
               const LabelVector* labels = nullptr, const std::string& label_name = "y");

/// Copy of the dataset with column j uniformly re-permuted; input untouched.
Dataset permute_column(const Dataset& data, std::size_t col, Rng& rng);

}  // namespace cpath
