#ifndef PAIRLABEL_METRICS_H_
#define PAIRLABEL_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pairlabel/labeler.h"
#include "pairlabel/types.h"

namespace pairlabel {

enum class LabelScope { kAll, kVotedOnly };

// Fraction of labels in scope that equal `truth` (indexed by point id).
// Throws ParameterError when truth is shorter than the label set or the scope
// is empty.
double LabelAccuracy(const LabelSet& labels, std::span<const Sign> truth,
                     LabelScope scope);

// sign(eta - 0.5) for every point; throws ConfigError if any eta is missing.
std::vector<Sign> BayesLabels(const Dataset& data);

struct TrialReport {
  std::uint64_t seed = 0;
  double label_accuracy = 0.0;        // all training points
  double voted_label_accuracy = 0.0;  // the n - t voted points
  double knn_test_accuracy = 0.0;
  std::uint64_t q_pos = 0;
  std::uint64_t q_amb = 0;
  std::string params;  // echo of the configuration that produced the trial
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1 denominator)
};

struct Aggregate {
  std::size_t trials = 0;
  // Set when only one report was aggregated; every std is then 0.
  bool single_report = false;
  MetricSummary label_accuracy;
  MetricSummary voted_label_accuracy;
  MetricSummary knn_test_accuracy;
  MetricSummary q_pos;
  MetricSummary q_amb;
};

MetricSummary Summarize(std::span<const double> values);
Aggregate AggregateReports(std::span<const TrialReport> reports);

// Column order:
//   trial,seed,label_accuracy,voted_label_accuracy,knn_test_accuracy,q_pos,q_amb,params
void WriteTrialReportsCsv(std::ostream& out,
                          std::span<const TrialReport> reports,
                          const std::string& comment);
// Two rows, `mean` and `std`, under
//   stat,trials,label_accuracy,voted_label_accuracy,knn_test_accuracy,q_pos,q_amb
void WriteAggregateCsv(std::ostream& out, const Aggregate& aggregate,
                       const std::string& comment);

}  // namespace pairlabel

#endif  // PAIRLABEL_METRICS_H_
