#ifndef PAIRLABEL_LABELER_H_
#define PAIRLABEL_LABELER_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pairlabel/oracle.h"
#include "pairlabel/rng.h"
#include "pairlabel/topt.h"
#include "pairlabel/types.h"

namespace pairlabel {

enum class DelegationPolicy { kRandomLabels, kRecurse };

std::string_view ToString(DelegationPolicy policy);
DelegationPolicy ParseDelegationPolicy(std::string_view text);

struct LabelingParams {
  std::size_t t = 1;
  std::size_t m = 1;
  DelegationPolicy delegation_policy = DelegationPolicy::kRandomLabels;
  // Number of delegation points each vote uses; all of them when unset.
  std::optional<std::size_t> vote_subset_size;

  void Validate(std::size_t n) const;
  std::size_t VotersPerPoint() const { return vote_subset_size.value_or(t); }
  bool operator==(const LabelingParams&) const = default;
};

enum class Provenance : std::uint8_t {
  kVoted,
  kRandomDelegation,
  kRecursedDelegation,
};

std::string_view ToString(Provenance provenance);

struct LabelSet {
  std::vector<Sign> labels;  // indexed by point id
  std::vector<Provenance> provenance;
  std::vector<PointId> delegation;  // top-level delegation set
  OracleStats queries;

  std::size_t size() const { return labels.size(); }
  std::size_t CountWith(Provenance p) const;
  bool operator==(const LabelSet&) const = default;
};

// Compares `x` with delegation points through the positivity oracle and
// returns kPlus iff the sum of the +-1 answers is at least 1/2, i.e. a strict
// majority of kPlus answers. An even split gives kMinus. When
// `vote_subset_size` is below the delegation size, that many voters are
// drawn uniformly without replacement.
Sign MajorityVoteLabel(const Dataset& data, PointId x,
                       std::span<const PointId> delegation,
                       ComparisonOracle& oracle,
                       std::optional<std::size_t> vote_subset_size, Rng& rng);

// Labels every point given a fixed delegation set: majority votes for points
// outside it, then the delegation policy for its members.
LabelSet LabelWithDelegation(const Dataset& data,
                             std::span<const PointId> delegation,
                             const LabelingParams& params,
                             ComparisonOracle& oracle, Rng& rng);

// Full pipeline: select the t most ambiguous points with ambiguity
// comparisons, label the rest by positivity votes against them, and label
// the selected points by the delegation policy. Requires n > t.
//
// Under kRecurse the selected points are relabeled by running the pipeline on
// them with t' = min(t, ceil(|D'| / 2)) until at most two points remain,
// which receive random labels.
LabelSet InferLabels(const Dataset& data, const LabelingParams& params,
                     ComparisonOracle& oracle, Rng& rng);

// Header `id,label,provenance,delegated`, preceded by `# comment` when
// `comment` is nonempty.
void WriteLabelSetCsv(std::ostream& out, const LabelSet& labels,
                      std::string_view comment = {});

}  // namespace pairlabel

#endif  // PAIRLABEL_LABELER_H_
