#ifndef PAIRLABEL_KNN_H_
#define PAIRLABEL_KNN_H_

#include <cstddef>
#include <span>
#include <vector>

#include "pairlabel/types.h"

namespace pairlabel {

enum class Metric { kEuclidean };

// Brute-force k-nearest-neighbor classifier over +-1 labels.
class KnnModel {
 public:
  // `ids` are tie-breaking keys, one per training point; they default to the
  // position in `features`. Throws ParameterError on empty input, ragged
  // dimensions, or k outside [1, n_train].
  KnnModel(std::vector<std::vector<double>> features, std::vector<Sign> labels,
           std::size_t k, Metric metric = Metric::kEuclidean,
           std::vector<PointId> ids = {});

  static KnnModel FromDataset(const Dataset& train, std::span<const Sign> labels,
                              std::size_t k);

  // Averages the labels of the k nearest training points (ascending distance,
  // equal distances broken by lower id) and returns kPlus iff the mean is
  // >= 0.
  Sign Predict(std::span<const double> x) const;

  // Indices into the training set of the k nearest points, nearest first.
  std::vector<std::size_t> Neighbors(std::span<const double> x) const;

  std::size_t k() const { return k_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return labels_.size(); }

 private:
  double Distance(std::span<const double> a, std::span<const double> b) const;

  std::vector<std::vector<double>> features_;
  std::vector<Sign> labels_;
  std::vector<PointId> ids_;
  std::size_t k_;
  std::size_t dim_;
  Metric metric_;
};

// Fraction of test points whose prediction equals their true_label. Throws
// ParameterError on an empty test set and DataError on a missing label.
double Evaluate(const KnnModel& model, const Dataset& test);

}  // namespace pairlabel

#endif  // PAIRLABEL_KNN_H_
