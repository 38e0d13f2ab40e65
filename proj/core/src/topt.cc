#include "pairlabel/topt.h"

#include <algorithm>
#include <bit>
#include <optional>
#include <string>

#include "pairlabel/errors.h"

namespace pairlabel {
namespace {

constexpr std::size_t kEmpty = static_cast<std::size_t>(-1);

std::uint64_t CeilLog2(std::uint64_t x) {
  return x <= 1 ? 0 : std::bit_width(x - 1);
}

struct MatchContext {
  const Dataset& data;
  std::size_t m;
  ComparisonOracle& oracle;
  Rng& rng;
  std::uint64_t matches = 0;

  PointId Play(PointId a, PointId b) {
    ++matches;
    return MajorityCompare(data[a], data[b], m, oracle, rng);
  }
};

// Single-elimination bracket over a fixed set of leaf slots. Internal nodes
// hold the slot index of the winner below them; vacated slots give byes.
class Knockout {
 public:
  Knockout(std::vector<std::optional<PointId>> slots, MatchContext& ctx)
      : slots_(std::move(slots)),
        width_(std::bit_ceil(std::max<std::size_t>(slots_.size(), 1))),
        nodes_(2 * width_, kEmpty),
        ctx_(&ctx) {
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      if (slots_[j]) nodes_[width_ + j] = j;
    }
    for (std::size_t i = width_ - 1; i >= 1; --i) {
      nodes_[i] = Play(nodes_[2 * i], nodes_[2 * i + 1]);
    }
  }

  std::size_t champion_slot() const { return nodes_[1]; }
  std::optional<PointId> champion() const {
    const std::size_t s = champion_slot();
    return s == kEmpty ? std::nullopt : slots_[s];
  }

  // Replaces the value in `slot` and replays the path to the root.
  void Reset(std::size_t slot, std::optional<PointId> value) {
    slots_[slot] = value;
    std::size_t i = width_ + slot;
    nodes_[i] = value ? slot : kEmpty;
    for (i /= 2; i >= 1; i /= 2) {
      nodes_[i] = Play(nodes_[2 * i], nodes_[2 * i + 1]);
    }
  }

 private:
  std::size_t Play(std::size_t a, std::size_t b) {
    if (a == kEmpty) return b;
    if (b == kEmpty) return a;
    const PointId winner = ctx_->Play(*slots_[a], *slots_[b]);
    return winner == *slots_[a] ? a : b;
  }

  std::vector<std::optional<PointId>> slots_;
  std::size_t width_;
  std::vector<std::size_t> nodes_;  // 1-based heap layout, leaves at width_
  MatchContext* ctx_;
};

}  // namespace

void SelectionParams::Validate(std::size_t n) const {
  if (t < 1) throw ParameterError("t must be at least 1");
  if (t > n) {
    throw ParameterError("t must not exceed n (t=" + std::to_string(t) +
                         ", n=" + std::to_string(n) + ")");
  }
  if (m < 1) throw ParameterError("m must be at least 1");
}

bool DelegationSet::Contains(PointId id) const {
  return std::find(members.begin(), members.end(), id) != members.end();
}

PointId MajorityCompare(const DataPoint& x1, const DataPoint& x2,
                        std::size_t m, ComparisonOracle& oracle, Rng& rng) {
  if (m < 1) throw ParameterError("m must be at least 1");
  long balance = 0;
  for (std::size_t r = 0; r < m; ++r) {
    balance += ToInt(oracle.Compare(OracleKind::kAmbiguity, x1, x2));
  }
  if (balance > 0) return x1.id;
  if (balance < 0) return x2.id;
  return rng.CoinFlip() == Sign::kPlus ? x1.id : x2.id;
}

DelegationSet SelectTopAmbiguous(const Dataset& data,
                                 std::span<const PointId> pool,
                                 const SelectionParams& params,
                                 ComparisonOracle& oracle, Rng& rng) {
  const std::size_t n = pool.size();
  const std::size_t t = params.t;
  params.Validate(n);

  std::vector<PointId> order(pool.begin(), pool.end());
  rng.Shuffle(std::span<PointId>(order));

  MatchContext ctx{data, params.m, oracle, rng};

  std::vector<std::vector<std::optional<PointId>>> dealt(t);
  for (std::size_t i = 0; i < n; ++i) dealt[i % t].push_back(order[i]);

  std::vector<Knockout> groups;
  groups.reserve(t);
  std::vector<std::optional<PointId>> champions;
  champions.reserve(t);
  for (auto& slots : dealt) {
    groups.emplace_back(std::move(slots), ctx);
    champions.push_back(groups.back().champion());
  }
  Knockout top(std::move(champions), ctx);

  DelegationSet out;
  out.members.reserve(t);
  while (true) {
    const std::size_t g = top.champion_slot();
    out.members.push_back(*top.champion());
    if (out.members.size() == t) break;
    Knockout& group = groups[g];
    group.Reset(group.champion_slot(), std::nullopt);
    top.Reset(g, group.champion());
  }
  out.ambiguity_queries = ctx.matches * params.m;
  return out;
}

DelegationSet SelectTopAmbiguous(const Dataset& data,
                                 const SelectionParams& params,
                                 ComparisonOracle& oracle, Rng& rng) {
  std::vector<PointId> all(data.size());
  for (PointId i = 0; i < all.size(); ++i) all[i] = i;
  return SelectTopAmbiguous(data, all, params, oracle, rng);
}

std::uint64_t SelectionMatchBound(std::size_t n, std::size_t t) {
  if (t < 1 || t > n) throw ParameterError("need 1 <= t <= n");
  const std::uint64_t group = (n + t - 1) / t;
  return (n - t) + (t - 1) + (t - 1) * (CeilLog2(group) + CeilLog2(t));
}

std::uint64_t SelectionQueryBound(std::size_t n, std::size_t t,
                                  std::size_t m) {
  return SelectionMatchBound(n, t) * m;
}

std::vector<PointId> ExactTopAmbiguous(const Dataset& data, std::size_t t) {
  if (t > data.size()) throw ParameterError("t must not exceed n");
  std::vector<PointId> ids(data.size());
  for (PointId i = 0; i < ids.size(); ++i) ids[i] = i;
  std::stable_sort(ids.begin(), ids.end(), [&](PointId a, PointId b) {
    return data[a].AmbiguityKey() < data[b].AmbiguityKey();
  });
  ids.resize(t);
  return ids;
}

}  // namespace pairlabel
