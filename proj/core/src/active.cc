#include "pairlabel/active.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "pairlabel/bounds.h"
#include "pairlabel/datagen.h"
#include "pairlabel/errors.h"
#include "pairlabel/metrics.h"
#include "pairlabel/text.h"

namespace pairlabel {

Hypothesis::Hypothesis(std::vector<double> weights)
    : weights_(std::move(weights)) {
  double norm = 0.0;
  for (double w : weights_) norm += w * w;
  if (!(norm > 0.0)) throw ParameterError("hypothesis weights must be nonzero");
}

Sign Hypothesis::Predict(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw ParameterError("hypothesis dimension mismatch");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += weights_[i] * x[i];
  return SignOf(dot);
}

std::vector<Hypothesis> LinearGrid(std::size_t count) {
  if (count < 1) throw ParameterError("grid needs at least one hypothesis");
  std::vector<Hypothesis> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
    out.emplace_back(std::vector<double>{std::cos(theta), std::sin(theta)});
  }
  return out;
}

std::vector<std::size_t> DisagreementRegion(std::span<const DataPoint> sample,
                                            std::span<const Hypothesis> hyps) {
  if (hyps.empty()) throw ParameterError("empty hypothesis set");
  std::vector<std::size_t> region;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Sign first = hyps.front().Predict(sample[i].features);
    for (std::size_t h = 1; h < hyps.size(); ++h) {
      if (hyps[h].Predict(sample[i].features) != first) {
        region.push_back(i);
        break;
      }
    }
  }
  return region;
}

FilterResult FilterHypothesesByCount(std::span<const Hypothesis> hyps,
                                     std::span<const DataPoint> sample,
                                     std::span<const Sign> labels,
                                     double max_errors) {
  if (labels.size() != sample.size()) {
    throw ParameterError("labels must cover the whole sample");
  }
  FilterResult out;
  out.errors.resize(hyps.size(), 0);
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (hyps[h].Predict(sample[j].features) != labels[j]) ++out.errors[h];
    }
    if (static_cast<double>(out.errors[h]) <= max_errors) {
      out.survivors.push_back(h);
    }
  }
  if (out.survivors.empty() && !hyps.empty()) {
    out.all_failed = true;
    const auto best = std::min_element(out.errors.begin(), out.errors.end());
    out.survivors.push_back(static_cast<std::size_t>(best - out.errors.begin()));
  }
  return out;
}

FilterResult FilterHypotheses(std::span<const Hypothesis> hyps,
                              std::span<const DataPoint> sample,
                              std::span<const Sign> labels, double eps_i) {
  return FilterHypothesesByCount(hyps, sample, labels,
                                 eps_i * static_cast<double>(sample.size()));
}

PoolSource::PoolSource(std::vector<DataPoint> pool) : pool_(std::move(pool)) {}

std::vector<DataPoint> PoolSource::Draw(std::size_t n, Rng& rng) {
  if (n > pool_.size()) {
    throw ExhaustedError("point pool exhausted: requested " +
                         std::to_string(n) + ", " +
                         std::to_string(pool_.size()) + " left");
  }
  // Partial Fisher-Yates into the tail, then cut the tail off.
  const std::size_t size = pool_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t last = size - 1 - i;
    const std::size_t j = rng.UniformBelow(last + 1);
    std::swap(pool_[j], pool_[last]);
  }
  std::vector<DataPoint> out(std::make_move_iterator(pool_.end() - n),
                             std::make_move_iterator(pool_.end()));
  pool_.resize(size - n);
  return out;
}

std::vector<DataPoint> TwoGaussianSource::Draw(std::size_t n, Rng& rng) {
  return DrawTwoGaussians(n, rng);
}

std::size_t ActiveConfig::Steps() const {
  return bounds::ActiveSteps(epsilon);
}

std::size_t ActiveConfig::StepSize(std::size_t round) const {
  return step_sizes.size() == 1 ? step_sizes.front() : step_sizes.at(round - 1);
}

void ActiveConfig::Validate() const {
  const std::size_t steps = Steps();
  if (step_sizes.empty()) throw ParameterError("step sizes must not be empty");
  if (step_sizes.size() != 1 && step_sizes.size() < steps) {
    throw ParameterError("need one step size or at least " +
                         std::to_string(steps));
  }
  for (std::size_t s : step_sizes) {
    if (s < 1) throw ParameterError("step sizes must be positive");
  }
  if (hypotheses.empty()) throw ParameterError("empty hypothesis set");
  if (labeling.t < 1 || labeling.m < 1) {
    throw ParameterError("labeling needs t >= 1 and m >= 1");
  }
}

double HypothesisAccuracy(const Hypothesis& h, const Dataset& test) {
  std::size_t correct = 0;
  for (const auto& p : test.points()) {
    if (!p.true_label) {
      throw DataError("test point " + std::to_string(p.id) + " has no label");
    }
    if (h.Predict(p.features) == *p.true_label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

namespace {

// Labels the disagreement region with the labeler, shrinking t when the
// region is too small for the round's precision.
std::vector<Sign> LabelRegion(const std::vector<DataPoint>& region_points,
                              double eps_i, const LabelingParams& nominal,
                              ComparisonOracle& oracle, Rng& rng,
                              StepTrace& row) {
  const std::size_t size = region_points.size();
  LabelingParams params = nominal;
  if (static_cast<double>(size) <
      static_cast<double>(params.t) / eps_i) {
    params.t = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(eps_i * static_cast<double>(size))));
    row.t_shrunk = params.t != nominal.t;
  }
  if (params.vote_subset_size) {
    params.vote_subset_size = std::min(*params.vote_subset_size, params.t);
  }
  row.t_used = params.t;
  if (size <= params.t) {
    row.region_random = true;
    std::vector<Sign> labels(size);
    for (auto& l : labels) l = rng.CoinFlip();
    return labels;
  }
  std::vector<DataPoint> renumbered = region_points;
  for (std::size_t i = 0; i < size; ++i) renumbered[i].id = i;
  const LabelSet result =
      InferLabels(Dataset(std::move(renumbered)), params, oracle, rng);
  row.q_pos = result.queries.count_positivity;
  row.q_amb = result.queries.count_ambiguity;
  return result.labels;
}

}  // namespace

ActiveResult RunDbal(const ActiveConfig& config, ComparisonOracle& oracle,
                     PointSource& source, const Dataset& test, Rng& rng) {
  config.Validate();
  if (!test.HasTrueLabels()) throw DataError("test set needs true labels");

  std::vector<std::size_t> current(config.hypotheses.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;

  ActiveResult result;
  std::vector<std::size_t> last_errors;
  const std::size_t steps = config.Steps();
  for (std::size_t round = 1; round <= steps; ++round) {
    StepTrace row;
    row.step = round;
    row.eps_i = bounds::StepPrecision(round);
    row.n_i = config.StepSize(round);

    std::vector<Hypothesis> hyps;
    hyps.reserve(current.size());
    for (std::size_t idx : current) hyps.push_back(config.hypotheses[idx]);

    const std::vector<DataPoint> sample = source.Draw(row.n_i, rng);
    const std::vector<std::size_t> region = DisagreementRegion(sample, hyps);
    row.region_size = region.size();

    // Outside the region every current hypothesis agrees; use that answer.
    std::vector<Sign> labels(sample.size());
    for (std::size_t j = 0; j < sample.size(); ++j) {
      labels[j] = hyps.front().Predict(sample[j].features);
    }
    row.t_used = config.labeling.t;
    if (!region.empty()) {
      std::vector<DataPoint> region_points;
      region_points.reserve(region.size());
      for (std::size_t j : region) region_points.push_back(sample[j]);
      const std::vector<Sign> region_labels = LabelRegion(
          region_points, row.eps_i, config.labeling, oracle, rng, row);
      for (std::size_t r = 0; r < region.size(); ++r) {
        labels[region[r]] = region_labels[r];
      }
    }

    const FilterResult filtered =
        FilterHypotheses(hyps, sample, labels, row.eps_i);
    row.all_eliminated = filtered.all_failed;
    std::vector<std::size_t> next;
    last_errors.clear();
    for (std::size_t s : filtered.survivors) {
      next.push_back(current[s]);
      last_errors.push_back(filtered.errors[s]);
    }
    current = std::move(next);
    row.survivors = current.size();

    std::vector<double> accs;
    accs.reserve(current.size());
    for (std::size_t idx : current) {
      accs.push_back(HypothesisAccuracy(config.hypotheses[idx], test));
    }
    const MetricSummary summary = Summarize(accs);
    row.mean_acc = summary.mean;
    row.std_acc = summary.std;
    result.trace.push_back(row);
  }

  const auto best = std::min_element(last_errors.begin(), last_errors.end());
  result.final_index = current[static_cast<std::size_t>(best - last_errors.begin())];
  result.survivors = current;
  return result;
}

void WriteTraceCsvHeader(std::ostream& out, bool with_trial) {
  if (with_trial) out << "trial,";
  out << "step,n_i,region_size,survivors,mean_acc,std_acc,q_pos,q_amb,t_used,"
         "t_shrunk,region_random,all_eliminated\n";
}

void WriteTraceCsvRow(std::ostream& out, const StepTrace& row,
                      std::optional<std::size_t> trial) {
  if (trial) out << *trial << ',';
  out << row.step << ',' << row.n_i << ',' << row.region_size << ','
      << row.survivors << ',' << text::FormatDouble(row.mean_acc) << ','
      << text::FormatDouble(row.std_acc) << ',' << row.q_pos << ','
      << row.q_amb << ',' << row.t_used << ',' << int{row.t_shrunk} << ','
      << int{row.region_random} << ',' << int{row.all_eliminated} << '\n';
}

}  // namespace pairlabel
