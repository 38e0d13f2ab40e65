#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pairlabel/errors.h"
#include "pairlabel/rng.h"
#include "pairlabel/sim_oracle.h"
#include "pairlabel/topt.h"
#include "support/oracles.h"

namespace pairlabel {
namespace {

using testing::BruteForceTopT;
using testing::EtaDataset;
using testing::ScriptedOracle;

std::vector<PointId> Sorted(std::vector<PointId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// n etas with pairwise distinct |eta - 0.5|.
std::vector<double> DistinctKeyEtas(std::size_t n, Rng& rng) {
  std::vector<double> etas;
  std::set<double> keys;
  while (etas.size() < n) {
    const double eta = rng.Uniform01();
    if (keys.insert(std::abs(eta - 0.5)).second) etas.push_back(eta);
  }
  return etas;
}

TEST(MajorityCompareTest, SingleVote) {
  const Dataset d = EtaDataset({0.3, 0.6});
  ScriptedOracle oracle({Sign::kPlus});
  Rng rng(0);
  EXPECT_EQ(MajorityCompare(d[0], d[1], 1, oracle, rng), 0u);
  ASSERT_EQ(oracle.asked.size(), 1u);
  EXPECT_EQ(oracle.asked[0].kind, OracleKind::kAmbiguity);
}

TEST(MajorityCompareTest, MajorityOfThree) {
  const Dataset d = EtaDataset({0.3, 0.6});
  Rng rng(0);
  ScriptedOracle win({Sign::kPlus, Sign::kPlus, Sign::kMinus});
  EXPECT_EQ(MajorityCompare(d[0], d[1], 3, win, rng), 0u);
  EXPECT_EQ(win.asked.size(), 3u);
  ScriptedOracle lose({Sign::kMinus, Sign::kPlus, Sign::kMinus});
  EXPECT_EQ(MajorityCompare(d[0], d[1], 3, lose, rng), 1u);
}

TEST(MajorityCompareTest, EvenSplitIsFair) {
  const Dataset d = EtaDataset({0.3, 0.6});
  Rng rng(1);
  int first = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    ScriptedOracle split({Sign::kPlus, Sign::kMinus});
    first += MajorityCompare(d[0], d[1], 2, split, rng) == 0;
  }
  EXPECT_NEAR(first / double(n), 0.5, 3 * testing::RateSigma(0.5, n));
}

TEST(MajorityCompareTest, NoiselessTenVotes) {
  // Ambiguity distances 0.05 and 0.30.
  const Dataset d = EtaDataset({0.55, 0.2});
  SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(2));
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(MajorityCompare(d[0], d[1], 10, oracle, rng), 0u);
  }
}

TEST(SelectTopAmbiguousTest, WorkedExample) {
  const Dataset d = EtaDataset({0.10, 0.45, 0.50, 0.90, 0.52});
  SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(4));
  Rng rng(5);
  const auto sel = SelectTopAmbiguous(d, {2, 1}, oracle, rng);
  EXPECT_EQ(Sorted(sel.members), (std::vector<PointId>{2, 4}));
  EXPECT_GT(sel.ambiguity_queries, 0u);
}

TEST(SelectTopAmbiguousTest, WholeSet) {
  const Dataset d = EtaDataset({0.1, 0.2, 0.3, 0.4});
  SimulatedOracle oracle(NoiseSpec{0, 0.3}, Rng(6));
  Rng rng(7);
  const auto sel = SelectTopAmbiguous(d, {4, 3}, oracle, rng);
  EXPECT_EQ(Sorted(sel.members), (std::vector<PointId>{0, 1, 2, 3}));
}

TEST(SelectTopAmbiguousTest, RejectsBadParams) {
  const Dataset d = EtaDataset({0.1, 0.2, 0.3});
  SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(6));
  Rng rng(7);
  EXPECT_THROW(SelectTopAmbiguous(d, {4, 1}, oracle, rng), ParameterError);
  EXPECT_THROW(SelectTopAmbiguous(d, {0, 1}, oracle, rng), ParameterError);
  EXPECT_THROW(SelectTopAmbiguous(d, {2, 0}, oracle, rng), ParameterError);
}

TEST(SelectTopAmbiguousTest, MatchesBruteForceOn200Instances) {
  Rng gen(2024);
  int matches = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto etas = DistinctKeyEtas(50, gen);
    const Dataset d = EtaDataset(etas);
    const std::size_t m = 1 + inst % 3;
    SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(inst));
    Rng rng(inst + 1000);
    const auto sel = SelectTopAmbiguous(d, {7, m}, oracle, rng);
    matches += Sorted(sel.members) == BruteForceTopT(etas, 7);
  }
  EXPECT_EQ(matches, 200);
}

// Random sizes, an independent noiseless oracle, and structural checks.
TEST(SelectTopAmbiguousTest, PropertyExactSizeSubsetAndEquivalence) {
  Rng gen(77);
  for (int inst = 0; inst < 300; ++inst) {
    const std::size_t n = 1 + gen.UniformBelow(60);
    const std::size_t t = 1 + gen.UniformBelow(std::min<std::size_t>(n, 9));
    const auto etas = DistinctKeyEtas(n, gen);
    const Dataset d = EtaDataset(etas);
    testing::EtaOrderOracle oracle;
    OracleStats stats;
    CountedOracle counted(oracle, stats);
    Rng rng(inst);
    const auto sel = SelectTopAmbiguous(d, {t, 1}, counted, rng);
    ASSERT_EQ(sel.members.size(), t);
    const std::set<PointId> unique(sel.members.begin(), sel.members.end());
    ASSERT_EQ(unique.size(), t);
    for (PointId id : sel.members) ASSERT_LT(id, n);
    EXPECT_EQ(Sorted(sel.members), BruteForceTopT(etas, t)) << "n=" << n << " t=" << t;
    EXPECT_EQ(sel.ambiguity_queries, stats.count_ambiguity);
    EXPECT_LE(sel.ambiguity_queries, SelectionQueryBound(n, t, 1));
  }
}

TEST(SelectTopAmbiguousTest, PoolRestrictsCandidates) {
  Rng gen(8);
  const auto etas = DistinctKeyEtas(30, gen);
  const Dataset d = EtaDataset(etas);
  std::vector<PointId> pool;
  for (PointId i = 0; i < 30; i += 2) pool.push_back(i);
  SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(9));
  Rng rng(10);
  const auto sel = SelectTopAmbiguous(d, pool, {4, 1}, oracle, rng);
  std::vector<double> pool_etas;
  for (PointId id : pool) pool_etas.push_back(etas[id]);
  std::vector<PointId> expected;
  for (PointId local : BruteForceTopT(pool_etas, 4)) expected.push_back(pool[local]);
  EXPECT_EQ(Sorted(sel.members), expected);
}

TEST(SelectTopAmbiguousTest, QueriesWithinBoundAndLinearInN) {
  const std::size_t t = 7, m = 3;
  for (std::size_t n : {50, 200, 800, 3200}) {
    Rng gen(n);
    const Dataset d = EtaDataset(DistinctKeyEtas(n, gen));
    SimulatedOracle oracle(NoiseSpec{0, 0.2}, Rng(n + 1));
    Rng rng(n + 2);
    const auto sel = SelectTopAmbiguous(d, {t, m}, oracle, rng);
    EXPECT_LE(sel.ambiguity_queries, SelectionQueryBound(n, t, m));
    EXPECT_LE(sel.ambiguity_queries, 2 * m * n) << "n=" << n;
  }
}

TEST(SelectTopAmbiguousTest, MatchBoundFormula) {
  // (n - t) + (t - 1) + (t - 1) * (ceil_log2(ceil(n / t)) + ceil_log2(t))
  EXPECT_EQ(SelectionMatchBound(5, 2), 3u + 1u + 1u * (2u + 1u));
  EXPECT_EQ(SelectionMatchBound(50, 7), 43u + 6u + 6u * (3u + 3u));
  EXPECT_EQ(SelectionMatchBound(10, 1), 9u);
  EXPECT_EQ(SelectionMatchBound(4, 4), 3u + 3u * (0u + 2u));
  EXPECT_EQ(SelectionQueryBound(50, 7, 3), 3 * SelectionMatchBound(50, 7));
}

TEST(SelectTopAmbiguousTest, DeterministicForSeed) {
  Rng gen(11);
  const Dataset d = EtaDataset(DistinctKeyEtas(40, gen));
  auto run = [&] {
    SimulatedOracle oracle(NoiseSpec{0, 0.3}, Rng(12));
    Rng rng(13);
    return SelectTopAmbiguous(d, {5, 3}, oracle, rng).members;
  };
  EXPECT_EQ(run(), run());
}

// Exact recovery on a fixed 20-point instance becomes more likely with m.
TEST(SelectTopAmbiguousTest, RecoveryImprovesWithRepetitions) {
  Rng gen(14);
  const auto etas = DistinctKeyEtas(20, gen);
  const Dataset d = EtaDataset(etas);
  const auto truth = BruteForceTopT(etas, 3);
  const int trials = 500;
  std::vector<double> rates;
  for (std::size_t m : {1, 5, 25}) {
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
      SimulatedOracle oracle(NoiseSpec{0, 0.3}, Rng(1000 * m + i));
      Rng rng(i);
      hits += Sorted(SelectTopAmbiguous(d, {3, m}, oracle, rng).members) == truth;
    }
    rates.push_back(hits / double(trials));
  }
  for (std::size_t i = 1; i < rates.size(); ++i) {
    const double slack = 2 * std::sqrt((rates[i] * (1 - rates[i]) +
                                        rates[i - 1] * (1 - rates[i - 1])) /
                                       trials);
    EXPECT_GE(rates[i] + slack, rates[i - 1]) << "step " << i;
  }
  EXPECT_GT(rates.back(), rates.front());
}

TEST(ExactTopAmbiguousTest, TiesGoToLowerId) {
  const Dataset d = EtaDataset({0.4, 0.6, 0.55, 0.45, 0.9});
  EXPECT_EQ(Sorted(ExactTopAmbiguous(d, 2)), (std::vector<PointId>{2, 3}));
  EXPECT_EQ(Sorted(ExactTopAmbiguous(d, 3)), (std::vector<PointId>{0, 2, 3}));
}

}  // namespace
}  // namespace pairlabel
