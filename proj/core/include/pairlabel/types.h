#ifndef PAIRLABEL_TYPES_H_
#define PAIRLABEL_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pairlabel {

using PointId = std::size_t;

// A binary label or a comparison answer. Labels use {+1, -1}; an answer of
// kPlus means the first (left) argument wins the comparison question.
enum class Sign : std::int8_t { kMinus = -1, kPlus = 1 };

constexpr int ToInt(Sign s) { return static_cast<int>(s); }
constexpr Sign Negate(Sign s) {
  return s == Sign::kPlus ? Sign::kMinus : Sign::kPlus;
}
// Maps an integer vote sum or score to a sign, with zero mapping to kPlus.
constexpr Sign SignOf(double v) { return v >= 0 ? Sign::kPlus : Sign::kMinus; }

enum class OracleKind : std::uint8_t {
  kPositivity,  // which point has the higher posterior
  kAmbiguity,   // which point is closer to the decision threshold
};

std::string_view ToString(OracleKind kind);
OracleKind ParseOracleKind(std::string_view text);

struct DataPoint {
  PointId id = 0;
  std::vector<double> features;
  std::optional<double> eta;  // p(Y = +1 | x)
  std::optional<Sign> true_label;
  std::optional<std::string> payload_ref;

  // Distance of the posterior from the 0.5 threshold; requires eta.
  double AmbiguityKey() const;
};

// Bayes classifier sign(eta - 0.5), with eta == 0.5 mapped to kPlus.
Sign BayesLabel(double eta);

// Ordered collection of points with dense ids 0..n-1 and uniform dimension.
class Dataset {
 public:
  // Validates ids, dimension, and eta range. Throws DataError.
  explicit Dataset(std::vector<DataPoint> points);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  const DataPoint& operator[](PointId id) const { return points_[id]; }
  std::span<const DataPoint> points() const { return points_; }

  bool HasEta() const;
  bool HasTrueLabels() const;

  // Copies the listed points, renumbering them 0..k-1 in list order.
  Dataset Subset(std::span<const PointId> ids) const;

 private:
  std::vector<DataPoint> points_;
  std::size_t dim_ = 0;
};

struct ComparisonQuery {
  std::uint64_t query_id = 0;
  OracleKind kind = OracleKind::kPositivity;
  PointId left = 0;
  PointId right = 0;
};

struct ComparisonAnswer {
  std::uint64_t query_id = 0;
  Sign answer = Sign::kPlus;
};

struct OracleStats {
  std::uint64_t count_positivity = 0;
  std::uint64_t count_ambiguity = 0;

  std::uint64_t total() const { return count_positivity + count_ambiguity; }
  void Record(OracleKind kind) {
    if (kind == OracleKind::kPositivity) {
      ++count_positivity;
    } else {
      ++count_ambiguity;
    }
  }
  OracleStats& operator+=(const OracleStats& other) {
    count_positivity += other.count_positivity;
    count_ambiguity += other.count_ambiguity;
    return *this;
  }
  bool operator==(const OracleStats&) const = default;
};

}  // namespace pairlabel

#endif  // PAIRLABEL_TYPES_H_
