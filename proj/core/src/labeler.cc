#include "pairlabel/labeler.h"

#include <algorithm>
#include <ostream>
#include <string>

#include "pairlabel/errors.h"

namespace pairlabel {
namespace {

struct Run {
  const Dataset& data;
  const LabelingParams& params;
  ComparisonOracle& oracle;  // already counting
  Rng& rng;
  LabelSet& out;

  void Vote(std::span<const PointId> pool, std::span<const PointId> delegation,
            Provenance provenance) {
    std::vector<bool> in_delegation(data.size(), false);
    for (PointId id : delegation) in_delegation[id] = true;
    std::optional<std::size_t> subset = params.vote_subset_size;
    if (subset) subset = std::min(*subset, delegation.size());
    for (PointId id : pool) {
      if (in_delegation[id]) continue;
      out.labels[id] =
          MajorityVoteLabel(data, id, delegation, oracle, subset, rng);
      out.provenance[id] = provenance;
    }
  }

  void AssignRandom(std::span<const PointId> ids, Provenance provenance) {
    for (PointId id : ids) {
      out.labels[id] = rng.CoinFlip();
      out.provenance[id] = provenance;
    }
  }

  // Labels `pool` from scratch; every label it assigns is marked as coming
  // from recursion.
  void Recurse(std::span<const PointId> pool) {
    if (pool.size() <= 2) {
      AssignRandom(pool, Provenance::kRecursedDelegation);
      return;
    }
    const std::size_t t = std::min(params.t, (pool.size() + 1) / 2);
    const DelegationSet inner = SelectTopAmbiguous(
        data, pool, SelectionParams{t, params.m}, oracle, rng);
    Vote(pool, inner.members, Provenance::kRecursedDelegation);
    Recurse(inner.members);
  }

  void LabelAll(std::span<const PointId> delegation) {
    std::vector<PointId> all(data.size());
    for (PointId i = 0; i < all.size(); ++i) all[i] = i;
    Vote(all, delegation, Provenance::kVoted);
    if (params.delegation_policy == DelegationPolicy::kRandomLabels) {
      AssignRandom(delegation, Provenance::kRandomDelegation);
    } else {
      Recurse(delegation);
    }
  }
};

LabelSet EmptyLabels(std::size_t n) {
  LabelSet out;
  out.labels.assign(n, Sign::kMinus);
  out.provenance.assign(n, Provenance::kVoted);
  return out;
}

}  // namespace

std::string_view ToString(DelegationPolicy policy) {
  return policy == DelegationPolicy::kRandomLabels ? "random" : "recurse";
}

DelegationPolicy ParseDelegationPolicy(std::string_view text) {
  if (text == "random") return DelegationPolicy::kRandomLabels;
  if (text == "recurse") return DelegationPolicy::kRecurse;
  throw ParameterError("delegation policy must be 'random' or 'recurse', got '" +
                       std::string(text) + "'");
}

std::string_view ToString(Provenance provenance) {
  switch (provenance) {
    case Provenance::kVoted:
      return "voted";
    case Provenance::kRandomDelegation:
      return "random_delegation";
    case Provenance::kRecursedDelegation:
      return "recursed_delegation";
  }
  return "unknown";
}

void LabelingParams::Validate(std::size_t n) const {
  if (t < 1) throw ParameterError("t must be at least 1");
  if (n <= t) {
    throw ParameterError("labeling requires n > t (n=" + std::to_string(n) +
                         ", t=" + std::to_string(t) + ")");
  }
  if (m < 1) throw ParameterError("m must be at least 1");
  if (vote_subset_size && (*vote_subset_size < 1 || *vote_subset_size > t)) {
    throw ParameterError("vote_subset_size must lie in [1, t]");
  }
}

std::size_t LabelSet::CountWith(Provenance p) const {
  return static_cast<std::size_t>(
      std::count(provenance.begin(), provenance.end(), p));
}

Sign MajorityVoteLabel(const Dataset& data, PointId x,
                       std::span<const PointId> delegation,
                       ComparisonOracle& oracle,
                       std::optional<std::size_t> vote_subset_size, Rng& rng) {
  if (delegation.empty()) throw ParameterError("delegation set is empty");
  std::vector<PointId> voters(delegation.begin(), delegation.end());
  if (std::find(voters.begin(), voters.end(), x) != voters.end()) {
    throw ParameterError("point " + std::to_string(x) +
                         " belongs to the delegation set");
  }
  if (vote_subset_size && *vote_subset_size < voters.size()) {
    if (*vote_subset_size < 1) throw ParameterError("vote subset is empty");
    // Partial Fisher-Yates: the first s slots become a uniform sample.
    for (std::size_t i = 0; i < *vote_subset_size; ++i) {
      const std::size_t j = i + rng.UniformBelow(voters.size() - i);
      std::swap(voters[i], voters[j]);
    }
    voters.resize(*vote_subset_size);
  }
  long sum = 0;
  for (PointId j : voters) {
    sum += ToInt(oracle.Compare(OracleKind::kPositivity, data[x], data[j]));
  }
  // Integer sum >= 1/2 means sum >= 1.
  return sum >= 1 ? Sign::kPlus : Sign::kMinus;
}

LabelSet LabelWithDelegation(const Dataset& data,
                             std::span<const PointId> delegation,
                             const LabelingParams& params,
                             ComparisonOracle& oracle, Rng& rng) {
  params.Validate(data.size());
  if (delegation.size() != params.t) {
    throw ParameterError("delegation set size must equal t");
  }
  std::vector<bool> seen(data.size(), false);
  for (PointId id : delegation) {
    if (id >= data.size() || seen[id]) {
      throw ParameterError("delegation ids must be distinct and below n");
    }
    seen[id] = true;
  }
  LabelSet out = EmptyLabels(data.size());
  out.delegation.assign(delegation.begin(), delegation.end());
  CountedOracle counted(oracle, out.queries);
  Run{data, params, counted, rng, out}.LabelAll(delegation);
  return out;
}

LabelSet InferLabels(const Dataset& data, const LabelingParams& params,
                     ComparisonOracle& oracle, Rng& rng) {
  params.Validate(data.size());
  LabelSet out = EmptyLabels(data.size());
  CountedOracle counted(oracle, out.queries);
  const DelegationSet selected = SelectTopAmbiguous(
      data, SelectionParams{params.t, params.m}, counted, rng);
  out.delegation = selected.members;
  Run{data, params, counted, rng, out}.LabelAll(selected.members);
  return out;
}

void WriteLabelSetCsv(std::ostream& out, const LabelSet& labels,
                      std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  std::vector<bool> delegated(labels.size(), false);
  for (const PointId id : labels.delegation) delegated[id] = true;
  out << "id,label,provenance,delegated\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << ',' << ToInt(labels.labels[i]) << ','
        << ToString(labels.provenance[i]) << ',' << (delegated[i] ? 1 : 0)
        << '\n';
  }
}

}  // namespace pairlabel
