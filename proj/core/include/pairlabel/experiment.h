#ifndef PAIRLABEL_EXPERIMENT_H_
#define PAIRLABEL_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pairlabel/active.h"
#include "pairlabel/bounds.h"
#include "pairlabel/labeler.h"
#include "pairlabel/metrics.h"
#include "pairlabel/parallel.h"
#include "pairlabel/sim_oracle.h"
#include "pairlabel/types.h"

// Experiment drivers behind the command-line subcommands. Every driver is a
// pure function of its config: trial i uses seed base_seed + i, trials may
// run on several threads, and results are merged by trial index.
namespace pairlabel::experiment {

// Either a CSV file (reused by every trial) or a fresh two-Gaussian sample
// of size n drawn with the trial seed.
struct DataSource {
  std::optional<std::filesystem::path> csv;
  std::size_t n = 2000;

  Dataset Load(std::uint64_t trial_seed) const;
  std::string Describe() const;
};

struct SimulateLabelConfig {
  DataSource data;
  NoiseSpec noise{0.4, 0.4};
  LabelingParams labeling{35, 1, DelegationPolicy::kRandomLabels, std::nullopt};
  std::size_t k = 5;
  double train_fraction = 0.8;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;
  // Use the exact top-t by |eta - 0.5| instead of querying the ambiguity
  // oracle.
  bool exact_delegation = false;

  void Validate() const;
  std::string Echo() const;
};

struct SimulateLabelResult {
  std::vector<TrialReport> trials;
  Aggregate aggregate;
};

TrialReport RunLabelTrial(const SimulateLabelConfig& config, std::size_t trial);
SimulateLabelResult RunSimulateLabel(const SimulateLabelConfig& config);
// Writes label_trials.csv and label_aggregate.csv into `out_dir`.
void WriteSimulateLabel(const std::filesystem::path& out_dir,
                        const SimulateLabelConfig& config,
                        const SimulateLabelResult& result);

struct ActiveRunConfig {
  DataSource data{std::nullopt, 10000};
  NoiseSpec noise{0.1, 0.1};
  double epsilon = 0.1;
  std::vector<std::size_t> step_sizes = {2000};
  std::size_t grid_size = 1000;
  LabelingParams labeling{3, 1, DelegationPolicy::kRandomLabels, std::nullopt};
  double train_fraction = 0.8;  // pool share; the rest scores survivors
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;

  void Validate() const;
  std::string Echo() const;
};

struct ActiveRunResult {
  std::vector<ActiveResult> trials;
};

ActiveResult RunActiveTrial(const ActiveRunConfig& config, std::size_t trial);
ActiveRunResult RunActive(const ActiveRunConfig& config);

// Per-step means over trials.
struct StepSummary {
  std::size_t step = 0;
  std::size_t n_i = 0;
  MetricSummary region_size;
  MetricSummary survivors;
  MetricSummary mean_acc;
  MetricSummary q_pos;
  MetricSummary q_amb;
};
std::vector<StepSummary> SummarizeActive(const ActiveRunResult& result);

// Writes active_trace.csv (one row per trial and step) and
// active_summary.csv (one row per step).
void WriteActive(const std::filesystem::path& out_dir,
                 const ActiveRunConfig& config, const ActiveRunResult& result);

struct BoundsConfig {
  std::vector<double> eps1 = {0.0, 0.1, 0.2, 0.3, 0.4};
  double eps2 = 0.1;
  std::size_t n = 10000;
  double c1 = 1.0;
  double c2 = 2.0;
  std::size_t k = 5;
  double omega = 1.0;
  double lambda = 1.0;
  double alpha = 0.0;
  double c_alpha = 1.0;
  double delta_prime = 0.05;
  // Label error fed to the k-NN bound; t / n of each row when unset.
  std::optional<double> label_error;

  void Validate() const;
  std::string Echo() const;
};

struct BoundsRow {
  double eps1 = 0.0;
  std::size_t t = 0;
  double hoeffding_a = 0.0;
  double failure_delta = 0.0;
  std::size_t m = 0;
  double label_error = 0.0;
  bounds::KnnBound knn;
};

std::vector<BoundsRow> ComputeBounds(const BoundsConfig& config);
void PrintBoundsTable(std::ostream& out, const BoundsConfig& config,
                      const std::vector<BoundsRow>& rows);
void WriteBoundsCsv(std::ostream& out, const BoundsConfig& config,
                    const std::vector<BoundsRow>& rows);

}  // namespace pairlabel::experiment

#endif  // PAIRLABEL_EXPERIMENT_H_
