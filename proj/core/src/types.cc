#include "pairlabel/types.h"

#include <cmath>

#include "pairlabel/errors.h"

namespace pairlabel {

std::string_view ToString(OracleKind kind) {
  return kind == OracleKind::kPositivity ? "positivity" : "ambiguity";
}

OracleKind ParseOracleKind(std::string_view text) {
  if (text == "positivity") return OracleKind::kPositivity;
  if (text == "ambiguity") return OracleKind::kAmbiguity;
  throw ParameterError("unknown oracle kind '" + std::string(text) + "'");
}

double DataPoint::AmbiguityKey() const {
  if (!eta) {
    throw ConfigError("point " + std::to_string(id) + " has no posterior");
  }
  return std::abs(*eta - 0.5);
}

Sign BayesLabel(double eta) { return SignOf(eta - 0.5); }

Dataset::Dataset(std::vector<DataPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw DataError("dataset must contain at least one point");
  dim_ = points_.front().features.size();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const DataPoint& p = points_[i];
    if (p.id != i) {
      throw DataError("point ids must be dense 0..n-1; found id " +
                      std::to_string(p.id) + " at position " +
                      std::to_string(i));
    }
    if (p.features.size() != dim_) {
      throw DataError("point " + std::to_string(i) + " has dimension " +
                      std::to_string(p.features.size()) + ", expected " +
                      std::to_string(dim_));
    }
    if (p.eta && !(*p.eta >= 0.0 && *p.eta <= 1.0)) {
      throw DataError("point " + std::to_string(i) + " has eta outside [0,1]");
    }
  }
}

bool Dataset::HasEta() const {
  for (const auto& p : points_) {
    if (!p.eta) return false;
  }
  return true;
}

bool Dataset::HasTrueLabels() const {
  for (const auto& p : points_) {
    if (!p.true_label) return false;
  }
  return true;
}

Dataset Dataset::Subset(std::span<const PointId> ids) const {
  std::vector<DataPoint> out;
  out.reserve(ids.size());
  for (PointId id : ids) {
    DataPoint p = points_.at(id);
    p.id = out.size();
    out.push_back(std::move(p));
  }
  return Dataset(std::move(out));
}

}  // namespace pairlabel
