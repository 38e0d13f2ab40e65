#ifndef PAIRLABEL_ORACLE_H_
#define PAIRLABEL_ORACLE_H_

#include "pairlabel/types.h"

namespace pairlabel {

// Source of pairwise comparison answers for both question kinds.
//
// Positivity: kPlus iff `left` is judged more likely to be positive.
// Ambiguity:  kPlus iff `left` is judged harder to classify.
//
// Answers need not be symmetric or transitive across calls.
class ComparisonOracle {
 public:
  virtual ~ComparisonOracle() = default;
  virtual Sign Compare(OracleKind kind, const DataPoint& left,
                       const DataPoint& right) = 0;
};

// Forwards to an inner oracle after bumping the matching counter. Rejects
// comparisons of a point with itself.
class CountedOracle : public ComparisonOracle {
 public:
  CountedOracle(ComparisonOracle& inner, OracleStats& stats)
      : inner_(inner), stats_(stats) {}

  Sign Compare(OracleKind kind, const DataPoint& left,
               const DataPoint& right) override;

  const OracleStats& stats() const { return stats_; }

 private:
  ComparisonOracle& inner_;
  OracleStats& stats_;
};

}  // namespace pairlabel

#endif  // PAIRLABEL_ORACLE_H_
