#ifndef PAIRLABEL_ACTIVE_H_
#define PAIRLABEL_ACTIVE_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pairlabel/labeler.h"
#include "pairlabel/oracle.h"
#include "pairlabel/rng.h"
#include "pairlabel/types.h"

namespace pairlabel {

// Linear classifier through the origin: sign(w . x) with sign(0) = +1.
class Hypothesis {
 public:
  explicit Hypothesis(std::vector<double> weights);

  Sign Predict(std::span<const double> x) const;
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// `count` 2-D classifiers with w_j = (cos theta_j, sin theta_j) and
// theta_j = 2 pi j / count. Contains both orientations of every boundary
// when count is even.
std::vector<Hypothesis> LinearGrid(std::size_t count);

// Indices (ascending) of the points on which at least two hypotheses
// disagree. Throws ParameterError on an empty hypothesis list.
std::vector<std::size_t> DisagreementRegion(std::span<const DataPoint> sample,
                                            std::span<const Hypothesis> hyps);

struct FilterResult {
  std::vector<std::size_t> survivors;  // indices into the input list
  std::vector<std::size_t> errors;     // per input hypothesis
  // No hypothesis met the threshold; `survivors` then holds only the one with
  // the fewest errors (lowest index on ties).
  bool all_failed = false;
};

// Keeps the hypotheses whose disagreement count with `labels` on `sample` is
// at most eps_i * |sample|.
FilterResult FilterHypotheses(std::span<const Hypothesis> hyps,
                              std::span<const DataPoint> sample,
                              std::span<const Sign> labels, double eps_i);
// Same with an absolute error budget.
FilterResult FilterHypothesesByCount(std::span<const Hypothesis> hyps,
                                     std::span<const DataPoint> sample,
                                     std::span<const Sign> labels,
                                     double max_errors);

// Supplies i.i.d. points for each active-learning round.
class PointSource {
 public:
  virtual ~PointSource() = default;
  // Throws ExhaustedError when fewer than n points remain.
  virtual std::vector<DataPoint> Draw(std::size_t n, Rng& rng) = 0;
};

// Draws from a finite pool without replacement.
class PoolSource : public PointSource {
 public:
  explicit PoolSource(std::vector<DataPoint> pool);
  std::vector<DataPoint> Draw(std::size_t n, Rng& rng) override;
  std::size_t remaining() const { return pool_.size(); }

 private:
  std::vector<DataPoint> pool_;
};

// Unlimited draws from the two-Gaussian mixture.
class TwoGaussianSource : public PointSource {
 public:
  std::vector<DataPoint> Draw(std::size_t n, Rng& rng) override;
};

struct ActiveConfig {
  double epsilon = 0.1;
  // n_i per round; a single entry is reused for every round.
  std::vector<std::size_t> step_sizes = {2000};
  std::vector<Hypothesis> hypotheses;
  // Labeler settings. `t` is the nominal delegation size; a round shrinks it
  // to floor(eps_i * |D_i|) when |D_i| < t / eps_i.
  LabelingParams labeling;

  std::size_t Steps() const;
  std::size_t StepSize(std::size_t round) const;
  void Validate() const;
};

struct StepTrace {
  std::size_t step = 0;  // 1-based
  double eps_i = 0.0;
  std::size_t n_i = 0;
  std::size_t region_size = 0;
  std::size_t survivors = 0;
  double mean_acc = 0.0;
  double std_acc = 0.0;
  std::uint64_t q_pos = 0;
  std::uint64_t q_amb = 0;
  std::size_t t_used = 0;
  bool t_shrunk = false;
  // The region was too small to run the labeler (|D_i| <= t); its points got
  // random labels.
  bool region_random = false;
  bool all_eliminated = false;
};

struct ActiveResult {
  std::size_t final_index = 0;  // into ActiveConfig::hypotheses
  std::vector<std::size_t> survivors;  // final set, indices into hypotheses
  std::vector<StepTrace> trace;
};

// Disagreement-based active learning over a finite hypothesis set. Each
// round draws S_i, restricts labeling to the disagreement region D_i, labels
// the rest of S_i with the unanimous prediction of the current set, and keeps
// hypotheses with at most eps_i * n_i disagreements, eps_i = 1 / 2^(i + 2).
// `test` (with true labels) scores the survivors after every round.
ActiveResult RunDbal(const ActiveConfig& config, ComparisonOracle& oracle,
                     PointSource& source, const Dataset& test, Rng& rng);

// Fraction of `test` points whose true_label the hypothesis predicts.
double HypothesisAccuracy(const Hypothesis& h, const Dataset& test);

// One row per step:
//   [trial,]step,n_i,region_size,survivors,mean_acc,std_acc,q_pos,q_amb,
//   t_used,t_shrunk,region_random,all_eliminated
void WriteTraceCsvHeader(std::ostream& out, bool with_trial);
void WriteTraceCsvRow(std::ostream& out, const StepTrace& row,
                      std::optional<std::size_t> trial = std::nullopt);

}  // namespace pairlabel

#endif  // PAIRLABEL_ACTIVE_H_
