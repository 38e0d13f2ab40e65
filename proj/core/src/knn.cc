#include "pairlabel/knn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pairlabel/errors.h"

namespace pairlabel {

KnnModel::KnnModel(std::vector<std::vector<double>> features,
                   std::vector<Sign> labels, std::size_t k, Metric metric,
                   std::vector<PointId> ids)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      ids_(std::move(ids)),
      k_(k),
      dim_(0),
      metric_(metric) {
  if (features_.empty()) throw ParameterError("k-NN needs training points");
  if (features_.size() != labels_.size()) {
    throw ParameterError("k-NN features and labels differ in length");
  }
  if (k_ < 1 || k_ > features_.size()) {
    throw ParameterError("k must lie in [1, n_train] (k=" + std::to_string(k_) +
                         ", n_train=" + std::to_string(features_.size()) + ")");
  }
  dim_ = features_.front().size();
  for (const auto& f : features_) {
    if (f.size() != dim_) throw ParameterError("ragged training features");
  }
  if (ids_.empty()) {
    ids_.resize(features_.size());
    std::iota(ids_.begin(), ids_.end(), PointId{0});
  } else if (ids_.size() != features_.size()) {
    throw ParameterError("k-NN ids and features differ in length");
  }
}

KnnModel KnnModel::FromDataset(const Dataset& train,
                               std::span<const Sign> labels, std::size_t k) {
  std::vector<std::vector<double>> features;
  features.reserve(train.size());
  for (const auto& p : train.points()) features.push_back(p.features);
  return KnnModel(std::move(features),
                  std::vector<Sign>(labels.begin(), labels.end()), k);
}

double KnnModel::Distance(std::span<const double> a,
                          std::span<const double> b) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;  // squared; monotone in the Euclidean distance
}

std::vector<std::size_t> KnnModel::Neighbors(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ParameterError("query has dimension " + std::to_string(x.size()) +
                         ", model expects " + std::to_string(dim_));
  }
  std::vector<std::pair<double, std::size_t>> scored(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    scored[i] = {Distance(x, features_[i]), i};
  }
  auto closer = [this](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return ids_[a.second] < ids_[b.second];
  };
  std::partial_sort(scored.begin(), scored.begin() + k_, scored.end(), closer);
  std::vector<std::size_t> out(k_);
  for (std::size_t q = 0; q < k_; ++q) out[q] = scored[q].second;
  return out;
}

Sign KnnModel::Predict(std::span<const double> x) const {
  long sum = 0;
  for (std::size_t i : Neighbors(x)) sum += ToInt(labels_[i]);
  return sum >= 0 ? Sign::kPlus : Sign::kMinus;
}

double Evaluate(const KnnModel& model, const Dataset& test) {
  if (test.size() == 0) throw ParameterError("empty test set");
  std::size_t correct = 0;
  for (const auto& p : test.points()) {
    if (!p.true_label) {
      throw DataError("test point " + std::to_string(p.id) + " has no label");
    }
    if (model.Predict(p.features) == *p.true_label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace pairlabel
