#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "pairlabel/active.h"
#include "pairlabel/datagen.h"
#include "pairlabel/errors.h"
#include "pairlabel/rng.h"
#include "pairlabel/sim_oracle.h"
#include "support/oracles.h"

namespace pairlabel {
namespace {

DataPoint Point(PointId id, double x1, double x2) {
  DataPoint p;
  p.id = id;
  p.features = {x1, x2};
  p.eta = TwoGaussianPosterior(x1, x2);
  p.true_label = BayesLabel(*p.eta);
  return p;
}

// Grid index of the Bayes direction (cos pi/4, sin pi/4) in LinearGrid(count).
std::size_t BayesIndex(std::size_t count) { return count / 8; }

TEST(HypothesisTest, SignOfDotWithZeroPositive) {
  const Hypothesis h({1.0, -1.0});
  const std::vector<double> a = {2.0, 1.0}, b = {1.0, 2.0}, c = {1.0, 1.0};
  EXPECT_EQ(h.Predict(a), Sign::kPlus);
  EXPECT_EQ(h.Predict(b), Sign::kMinus);
  EXPECT_EQ(h.Predict(c), Sign::kPlus);
  EXPECT_THROW(Hypothesis({0.0, 0.0}), ParameterError);
}

TEST(DisagreementRegionTest, Example) {
  const std::vector<Hypothesis> hyps = {Hypothesis({1.0, 1.0}),
                                        Hypothesis({1.0, -1.0})};
  // (1, 1) and (-2, -1) get the same sign from both; (-1, 2) splits them.
  const std::vector<DataPoint> sample = {Point(0, 1, 1), Point(1, -1, 2),
                                         Point(2, -2, -1)};
  EXPECT_EQ(DisagreementRegion(sample, hyps), (std::vector<std::size_t>{1}));
}

TEST(DisagreementRegionTest, SingleHypothesisHasEmptyRegion) {
  const std::vector<Hypothesis> one = {Hypothesis({0.3, 0.7})};
  Rng rng(1);
  const auto sample = DrawTwoGaussians(200, rng);
  EXPECT_TRUE(DisagreementRegion(sample, one).empty());
  EXPECT_THROW(DisagreementRegion(sample, std::vector<Hypothesis>{}),
               ParameterError);
}

// A grid with both orientations of every boundary disagrees everywhere except
// where some w . x is exactly zero.
TEST(DisagreementRegionTest, FullGridCoversSample) {
  const auto grid = LinearGrid(16);
  Rng rng(2);
  const auto sample = DrawTwoGaussians(300, rng);
  EXPECT_EQ(DisagreementRegion(sample, grid).size(), sample.size());
}

TEST(LinearGridTest, UnitVectorsAtEvenAngles) {
  const auto grid = LinearGrid(8);
  ASSERT_EQ(grid.size(), 8u);
  for (std::size_t j = 0; j < 8; ++j) {
    const auto& w = grid[j].weights();
    EXPECT_NEAR(std::hypot(w[0], w[1]), 1.0, 1e-15);
    EXPECT_NEAR(std::atan2(w[1], w[0]),
                std::remainder(2 * std::numbers::pi * j / 8, 2 * std::numbers::pi),
                1e-12);
  }
  EXPECT_THROW(LinearGrid(0), ParameterError);
}

TEST(FilterTest, ThresholdAndFallback) {
  const std::vector<Hypothesis> hyps = {Hypothesis({1.0, 0.0}),
                                        Hypothesis({-1.0, 0.0})};
  const std::vector<DataPoint> sample = {Point(0, 1, 0), Point(1, 2, 0),
                                         Point(2, -1, 0), Point(3, 3, 0)};
  const std::vector<Sign> labels = {Sign::kPlus, Sign::kPlus, Sign::kPlus,
                                    Sign::kPlus};
  // errors: h0 -> 1, h1 -> 3.
  const FilterResult loose = FilterHypotheses(hyps, sample, labels, 1.0);
  EXPECT_EQ(loose.survivors, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(loose.errors, (std::vector<std::size_t>{1, 3}));
  const FilterResult mid = FilterHypotheses(hyps, sample, labels, 0.25);
  EXPECT_EQ(mid.survivors, (std::vector<std::size_t>{0}));
  EXPECT_FALSE(mid.all_failed);
  const FilterResult none = FilterHypotheses(hyps, sample, labels, 0.1);
  EXPECT_TRUE(none.all_failed);
  EXPECT_EQ(none.survivors, (std::vector<std::size_t>{0}));
  const std::vector<Sign> short_labels = {Sign::kPlus};
  EXPECT_THROW(FilterHypotheses(hyps, sample, short_labels, 0.5), ParameterError);
}

TEST(FilterTest, AllFailedTiesGoToLowestIndex) {
  const std::vector<Hypothesis> hyps = {Hypothesis({0.0, 1.0}),
                                        Hypothesis({0.0, -1.0})};
  const std::vector<DataPoint> sample = {Point(0, 0, 1), Point(1, 0, -1)};
  // One error each.
  const std::vector<Sign> labels = {Sign::kPlus, Sign::kPlus};
  const FilterResult r = FilterHypothesesByCount(hyps, sample, labels, 0.0);
  EXPECT_TRUE(r.all_failed);
  EXPECT_EQ(r.survivors, (std::vector<std::size_t>{0}));
}

TEST(PoolSourceTest, DrawsWithoutReplacementThenExhausts) {
  std::vector<DataPoint> pool;
  for (PointId i = 0; i < 10; ++i) pool.push_back(Point(i, double(i), 0));
  PoolSource source(pool);
  Rng rng(3);
  std::vector<PointId> seen;
  for (const auto& p : source.Draw(4, rng)) seen.push_back(p.id);
  for (const auto& p : source.Draw(6, rng)) seen.push_back(p.id);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<PointId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_EQ(source.remaining(), 0u);
  EXPECT_THROW(source.Draw(1, rng), ExhaustedError);
}

ActiveConfig GridConfig(std::size_t grid, std::size_t n_i, std::size_t t) {
  ActiveConfig config;
  config.epsilon = 0.1;
  config.step_sizes = {n_i};
  config.hypotheses = LinearGrid(grid);
  config.labeling = LabelingParams{t, 1};
  return config;
}

TEST(ActiveConfigTest, StepsAndValidation) {
  ActiveConfig config = GridConfig(8, 100, 3);
  EXPECT_EQ(config.Steps(), 3u);
  EXPECT_EQ(config.StepSize(2), 100u);
  config.step_sizes = {10, 20};
  EXPECT_THROW(config.Validate(), ParameterError);
  config.step_sizes = {10, 20, 30};
  EXPECT_NO_THROW(config.Validate());
  EXPECT_EQ(config.StepSize(3), 30u);
  config.hypotheses.clear();
  EXPECT_THROW(config.Validate(), ParameterError);
}

TEST(RunDbalTest, SingleHypothesisAsksNothing) {
  ActiveConfig config = GridConfig(1, 200, 3);
  const Dataset test = GenTwoGaussians({100, 1});
  testing::ScriptedOracle oracle({});
  TwoGaussianSource source;
  Rng rng(4);
  const ActiveResult r = RunDbal(config, oracle, source, test, rng);
  ASSERT_EQ(r.trace.size(), 3u);
  for (const auto& row : r.trace) {
    EXPECT_EQ(row.region_size, 0u);
    EXPECT_EQ(row.q_pos + row.q_amb, 0u);
    EXPECT_EQ(row.survivors, 1u);
  }
  EXPECT_TRUE(oracle.asked.empty());
  EXPECT_EQ(r.final_index, 0u);
}

// Noiseless labels differ from the Bayes direction only on the t' randomly
// labeled delegation points, and t' <= eps_i |D_i| keeps it in the set.
TEST(RunDbalTest, NoiselessKeepsBayesDirection) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ActiveConfig config = GridConfig(32, 600, 3);
    const Dataset test = GenTwoGaussians({500, 100 + seed});
    SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(seed).Fork(streams::kOracle));
    TwoGaussianSource source;
    Rng rng = Rng(seed).Fork(streams::kAlgorithm);
    const ActiveResult r = RunDbal(config, oracle, source, test, rng);
    EXPECT_NE(std::find(r.survivors.begin(), r.survivors.end(), BayesIndex(32)),
              r.survivors.end())
        << "seed " << seed;
    std::size_t prev = config.hypotheses.size();
    for (const auto& row : r.trace) {
      EXPECT_LE(row.survivors, prev);
      EXPECT_FALSE(row.all_eliminated);
      EXPECT_LE(row.t_used, 3u);
      prev = row.survivors;
    }
    EXPECT_NE(std::find(r.survivors.begin(), r.survivors.end(), r.final_index),
              r.survivors.end());
  }
}

TEST(RunDbalTest, DeterministicAndTraceShape) {
  auto run = [](std::uint64_t seed) {
    ActiveConfig config = GridConfig(16, 400, 3);
    const Dataset test = GenTwoGaussians({200, 7});
    SimulatedOracle oracle(NoiseSpec{0.1, 0.1}, Rng(seed).Fork(streams::kOracle));
    TwoGaussianSource source;
    Rng rng = Rng(seed).Fork(streams::kAlgorithm);
    std::ostringstream out;
    WriteTraceCsvHeader(out, true);
    for (const auto& row : RunDbal(config, oracle, source, test, rng).trace) {
      WriteTraceCsvRow(out, row, 0);
    }
    return out.str();
  };
  const std::string a = run(11);
  EXPECT_EQ(a, run(11));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 4);
  EXPECT_EQ(a.rfind("trial,step,n_i,region_size,survivors,mean_acc,std_acc,"
                    "q_pos,q_amb,t_used,t_shrunk,region_random,all_eliminated\n",
                    0),
            0u);
}

TEST(RunDbalTest, ShrinksTOnSmallRegions) {
  // eps_1 = 1/8 and nominal t = 50 need |D_1| >= 400; a sample of 80 forces
  // t' = floor(|D_1| / 8).
  ActiveConfig config = GridConfig(16, 80, 50);
  const Dataset test = GenTwoGaussians({100, 3});
  SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(5));
  TwoGaussianSource source;
  Rng rng(6);
  const ActiveResult r = RunDbal(config, oracle, source, test, rng);
  const StepTrace& first = r.trace.front();
  EXPECT_EQ(first.region_size, 80u);
  EXPECT_TRUE(first.t_shrunk);
  EXPECT_EQ(first.t_used, 10u);
  EXPECT_EQ(first.q_pos, 10u * 70u);
}

TEST(RunDbalTest, PoolExhaustionPropagates) {
  ActiveConfig config = GridConfig(8, 100, 3);
  const Dataset test = GenTwoGaussians({50, 3});
  Rng pool_rng(1);
  PoolSource source(DrawTwoGaussians(150, pool_rng));
  SimulatedOracle oracle(NoiseSpec{0, 0}, Rng(2));
  Rng rng(3);
  EXPECT_THROW(RunDbal(config, oracle, source, test, rng), ExhaustedError);
}

TEST(HypothesisAccuracyTest, BayesDirectionBeatsOrthogonal) {
  const Dataset test = GenTwoGaussians({2000, 8});
  const auto grid = LinearGrid(8);
  EXPECT_GT(HypothesisAccuracy(grid[1], test), 0.99);
  EXPECT_NEAR(HypothesisAccuracy(grid[3], test), 0.5, 0.05);
  EXPECT_LT(HypothesisAccuracy(grid[5], test), 0.01);
}

}  // namespace
}  // namespace pairlabel
