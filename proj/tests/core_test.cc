#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pairlabel/errors.h"
#include "pairlabel/oracle.h"
#include "pairlabel/rng.h"
#include "pairlabel/text.h"
#include "pairlabel/types.h"
#include "support/oracles.h"

namespace pairlabel {
namespace {

// SplitMix64 finalizer, written out independently of the library.
std::uint64_t RefMix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DataPoint Point(PointId id, std::vector<double> f,
                std::optional<double> eta = std::nullopt) {
  DataPoint p;
  p.id = id;
  p.features = std::move(f);
  p.eta = eta;
  return p;
}

TEST(SignTest, Helpers) {
  EXPECT_EQ(ToInt(Sign::kPlus), 1);
  EXPECT_EQ(ToInt(Sign::kMinus), -1);
  EXPECT_EQ(Negate(Sign::kPlus), Sign::kMinus);
  EXPECT_EQ(SignOf(0.0), Sign::kPlus);
  EXPECT_EQ(SignOf(-1e-12), Sign::kMinus);
}

TEST(BayesLabelTest, ThresholdMapsToPlus) {
  EXPECT_EQ(BayesLabel(0.5), Sign::kPlus);
  EXPECT_EQ(BayesLabel(0.4999), Sign::kMinus);
  EXPECT_EQ(BayesLabel(1.0), Sign::kPlus);
}

TEST(OracleKindTest, RoundTrip) {
  for (OracleKind k : {OracleKind::kPositivity, OracleKind::kAmbiguity}) {
    EXPECT_EQ(ParseOracleKind(ToString(k)), k);
  }
  EXPECT_EQ(ToString(OracleKind::kAmbiguity), "ambiguity");
  EXPECT_THROW(ParseOracleKind("both"), ParameterError);
}

TEST(DatasetTest, AcceptsDensePoints) {
  Dataset d({Point(0, {1, 2}, 0.3), Point(1, {3, 4}, 0.7)});
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_TRUE(d.HasEta());
  EXPECT_FALSE(d.HasTrueLabels());
  EXPECT_DOUBLE_EQ(d[1].AmbiguityKey(), 0.2);
}

TEST(DatasetTest, RejectsInvalidInput) {
  EXPECT_THROW(Dataset({}), DataError);
  EXPECT_THROW(Dataset({Point(0, {1}), Point(2, {1})}), DataError);
  EXPECT_THROW(Dataset({Point(0, {1}), Point(1, {1, 2})}), DataError);
  EXPECT_THROW(Dataset({Point(0, {1}, 1.3)}), DataError);
  EXPECT_THROW(Dataset({Point(0, {1}, -0.1)}), DataError);
}

TEST(DatasetTest, SubsetRenumbers) {
  Dataset d({Point(0, {0}, 0.1), Point(1, {1}, 0.2), Point(2, {2}, 0.3)});
  const std::vector<PointId> ids = {2, 0};
  Dataset s = d.Subset(ids);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].id, 0u);
  EXPECT_DOUBLE_EQ(*s[0].eta, 0.3);
  EXPECT_DOUBLE_EQ(s[1].features[0], 0.0);
}

TEST(RngTest, MatchesReferenceStream) {
  constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
    for (std::uint64_t stream : {0ULL, 3ULL}) {
      Rng rng(seed, stream);
      const std::uint64_t key = RefMix(seed ^ RefMix(stream + kGamma));
      for (std::uint64_t i = 1; i <= 5; ++i) {
        EXPECT_EQ(rng.NextU64(), RefMix(key + i * kGamma));
      }
    }
  }
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.NextU64();
    EXPECT_EQ(x, b.NextU64());
    differs |= x != c.NextU64();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, ForkIsIndependentAndDoesNotAdvance) {
  Rng root(7);
  Rng f1 = root.Fork(streams::kOracle);
  EXPECT_EQ(root.counter(), 0u);
  Rng f2 = root.Fork(streams::kOracle);
  Rng f3 = root.Fork(streams::kSplit);
  EXPECT_EQ(f1.NextU64(), f2.NextU64());
  EXPECT_NE(f1.NextU64(), f3.NextU64());
  EXPECT_EQ(Rng::TrialSeed(100, 7), 107u);
}

TEST(RngTest, UniformBelowCoversRangeEvenly) {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.UniformBelow(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  const double p = 1.0 / 7;
  for (int c : counts) {
    EXPECT_NEAR(c / double(n), p, 4 * testing::RateSigma(p, n));
  }
  EXPECT_THROW(rng.UniformBelow(0), ParameterError);
  EXPECT_EQ(rng.UniformBelow(1), 0u);
}

TEST(RngTest, UniformAndNormalMoments) {
  Rng rng(2);
  const int n = 100000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.Normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sn / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(RngTest, CoinAndBernoulliRates) {
  Rng rng(3);
  const int n = 100000;
  int heads = 0, hits = 0;
  for (int i = 0; i < n; ++i) {
    heads += rng.CoinFlip() == Sign::kPlus;
    hits += rng.Bernoulli(0.2);
  }
  EXPECT_NEAR(heads / double(n), 0.5, 3 * testing::RateSigma(0.5, n));
  EXPECT_NEAR(hits / double(n), 0.2, 3 * testing::RateSigma(0.2, n));
}

TEST(RngTest, ShuffleIsPermutation) {
  Rng rng(4);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.Shuffle(std::span<int>(w));
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

class ConstOracle : public ComparisonOracle {
 public:
  Sign Compare(OracleKind, const DataPoint&, const DataPoint&) override {
    return Sign::kPlus;
  }
};

TEST(CountedOracleTest, CountsByKind) {
  ConstOracle inner;
  OracleStats stats;
  CountedOracle counted(inner, stats);
  EXPECT_EQ(stats, OracleStats{});
  const DataPoint a = Point(0, {0}), b = Point(1, {1});
  for (int i = 0; i < 3; ++i) counted.Compare(OracleKind::kPositivity, a, b);
  for (int i = 0; i < 2; ++i) counted.Compare(OracleKind::kAmbiguity, b, a);
  EXPECT_EQ(stats.count_positivity, 3u);
  EXPECT_EQ(stats.count_ambiguity, 2u);
  EXPECT_EQ(stats.total(), 5u);
}

TEST(CountedOracleTest, RejectsSelfComparison) {
  ConstOracle inner;
  OracleStats stats;
  CountedOracle counted(inner, stats);
  const DataPoint a = Point(0, {0});
  EXPECT_THROW(counted.Compare(OracleKind::kPositivity, a, a), ParameterError);
  EXPECT_EQ(stats.total(), 0u);
}

TEST(TextTest, DoublesRoundTrip) {
  for (double v : {0.0, 0.1, -2.5, 1e-300, 0.99966464986953363, 123456.789}) {
    double back = 0;
    ASSERT_TRUE(text::ParseDouble(text::FormatDouble(v), back));
    EXPECT_EQ(back, v);
  }
  double x;
  EXPECT_TRUE(text::ParseDouble("+1", x));
  EXPECT_EQ(x, 1.0);
  EXPECT_FALSE(text::ParseDouble("1.0x", x));
  EXPECT_FALSE(text::ParseDouble("", x));
  EXPECT_EQ(text::FormatFixed(0.49658, 3), "0.497");
}

TEST(TextTest, SizesAndCells) {
  std::size_t n = 0;
  EXPECT_TRUE(text::ParseSize("42", n));
  EXPECT_EQ(n, 42u);
  EXPECT_FALSE(text::ParseSize("-1", n));
  EXPECT_FALSE(text::ParseSize("4 2", n));
  EXPECT_EQ(text::CsvCell("plain"), "plain");
  EXPECT_EQ(text::CsvCell("a,b"), "\"a,b\"");
  EXPECT_EQ(text::CsvCell("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace pairlabel
