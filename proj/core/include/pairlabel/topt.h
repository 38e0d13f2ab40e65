#ifndef PAIRLABEL_TOPT_H_
#define PAIRLABEL_TOPT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pairlabel/oracle.h"
#include "pairlabel/rng.h"
#include "pairlabel/types.h"

namespace pairlabel {

struct SelectionParams {
  std::size_t t = 1;  // number of points to select
  std::size_t m = 1;  // oracle repetitions per match

  // Throws ParameterError unless 1 <= t <= n and m >= 1.
  void Validate(std::size_t n) const;
};

// The t points judged most ambiguous. Unordered.
struct DelegationSet {
  std::vector<PointId> members;
  std::uint64_t ambiguity_queries = 0;

  bool Contains(PointId id) const;
};

// Asks the ambiguity question about (x1, x2) exactly m times and returns the
// id of the point that won strictly more votes. An even split is decided by
// a fair coin.
PointId MajorityCompare(const DataPoint& x1, const DataPoint& x2,
                        std::size_t m, ComparisonOracle& oracle, Rng& rng);

// Selects the t most ambiguous points of `pool` (ids into `data`) using only
// ambiguity comparisons.
//
// The pool is shuffled and dealt round-robin into t groups. Each group runs
// a single-elimination knockout whose matches are MajorityCompare calls, and
// a second knockout is played between the t group champions. The overall
// champion is moved to the output, its group replays the path from the
// vacated leaf to produce a new champion, and the top knockout replays that
// group's path. This repeats until t points have been extracted. No ranking
// of the selected or rejected points is produced.
//
// With a noiseless oracle and distinct keys the result equals the exact t
// smallest values of |eta - 0.5|.
DelegationSet SelectTopAmbiguous(const Dataset& data,
                                 std::span<const PointId> pool,
                                 const SelectionParams& params,
                                 ComparisonOracle& oracle, Rng& rng);
DelegationSet SelectTopAmbiguous(const Dataset& data,
                                 const SelectionParams& params,
                                 ComparisonOracle& oracle, Rng& rng);

// Upper bound on the number of matches SelectTopAmbiguous plays on a pool of
// n points:
//
//   (n - t) + (t - 1) + (t - 1) * (ceil_log2(ceil(n / t)) + ceil_log2(t))
//
// (group knockouts, champion knockout, and one replay of both paths per
// extraction after the first). Oracle queries are at most m times this.
std::uint64_t SelectionMatchBound(std::size_t n, std::size_t t);
std::uint64_t SelectionQueryBound(std::size_t n, std::size_t t, std::size_t m);

// Exact top-t by sorting on |eta - 0.5| (ties by lower id). Reference answer
// for tests and for runs that force an exact delegation set.
std::vector<PointId> ExactTopAmbiguous(const Dataset& data, std::size_t t);

}  // namespace pairlabel

#endif  // PAIRLABEL_TOPT_H_
