#pragma once

#include <cstddef>
#include <vector>

#include "cpath/dataset.hpp"

namespace cpath {

/// Prediction oracle M: dataset -> class labels in {1, ..., g}. Predict must
/// be a pure function of its input; g is fixed at model creation.
class BlackBoxModel {
 public:
  virtual ~BlackBoxModel() = default;

  virtual LabelVector predict(const Dataset& data) const = 0;

  virtual int n_classes() const = 0;

  /// Feature count the model was built with; 0 when unknown (external models).
  virtual std::size_t n_features() const { return 0; }

  /// True when predict may be called from several threads at once.
  virtual bool supports_concurrent_predict() const { return false; }

  /// Per-row score of the requested class (one target class per row).
  /// The builtin forest reports vote fractions; the default falls back to a
  /// 0/1 indicator from predicted labels, which is all a label-only oracle
  /// can offer.
  virtual std::vector<double> class_scores(const Dataset& data,
                                           const std::vector<int>& target_class) const {
    const LabelVector preds = predict(data);
    std::vector<double> out(data.rows());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = preds[i] == target_class[i] ? 1.0 : 0.0;
    return out;
  }
};

}  // namespace cpath
