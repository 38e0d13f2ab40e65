#include "pairlabel/metrics.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pairlabel/errors.h"
#include "pairlabel/text.h"

namespace pairlabel {

double LabelAccuracy(const LabelSet& labels, std::span<const Sign> truth,
                     LabelScope scope) {
  if (truth.size() < labels.size()) {
    throw ParameterError("truth does not cover every labeled point");
  }
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (scope == LabelScope::kVotedOnly &&
        labels.provenance[i] != Provenance::kVoted) {
      continue;
    }
    ++total;
    if (labels.labels[i] == truth[i]) ++correct;
  }
  if (total == 0) throw ParameterError("no labels in scope");
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<Sign> BayesLabels(const Dataset& data) {
  std::vector<Sign> out;
  out.reserve(data.size());
  for (const auto& p : data.points()) {
    if (!p.eta) {
      throw ConfigError("point " + std::to_string(p.id) + " has no eta");
    }
    out.push_back(BayesLabel(*p.eta));
  }
  return out;
}

MetricSummary Summarize(std::span<const double> input) {
  if (input.empty()) throw ParameterError("nothing to summarize");
  // Summing in sorted order makes the result independent of report order.
  std::vector<double> values(input.begin(), input.end());
  std::sort(values.begin(), values.end());
  MetricSummary s;
  // Constant columns report their value and an exact zero spread.
  if (values.front() == values.back()) {
    s.mean = values.front();
    return s;
  }
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

Aggregate AggregateReports(std::span<const TrialReport> reports) {
  if (reports.empty()) throw ParameterError("no trial reports to aggregate");
  auto column = [&](auto field) {
    std::vector<double> v;
    v.reserve(reports.size());
    for (const auto& r : reports) v.push_back(static_cast<double>(r.*field));
    return Summarize(v);
  };
  Aggregate a;
  a.trials = reports.size();
  a.single_report = reports.size() == 1;
  a.label_accuracy = column(&TrialReport::label_accuracy);
  a.voted_label_accuracy = column(&TrialReport::voted_label_accuracy);
  a.knn_test_accuracy = column(&TrialReport::knn_test_accuracy);
  a.q_pos = column(&TrialReport::q_pos);
  a.q_amb = column(&TrialReport::q_amb);
  return a;
}

void WriteTrialReportsCsv(std::ostream& out,
                          std::span<const TrialReport> reports,
                          const std::string& comment) {
  out << "# " << comment << '\n';
  out << "trial,seed,label_accuracy,voted_label_accuracy,knn_test_accuracy,"
         "q_pos,q_amb,params\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << i << ',' << r.seed << ',' << text::FormatDouble(r.label_accuracy)
        << ',' << text::FormatDouble(r.voted_label_accuracy) << ','
        << text::FormatDouble(r.knn_test_accuracy) << ',' << r.q_pos << ','
        << r.q_amb << ',' << text::CsvCell(r.params) << '\n';
  }
}

void WriteAggregateCsv(std::ostream& out, const Aggregate& a,
                       const std::string& comment) {
  out << "# " << comment << '\n';
  out << "stat,trials,label_accuracy,voted_label_accuracy,knn_test_accuracy,"
         "q_pos,q_amb\n";
  auto row = [&](const char* name, auto pick) {
    out << name << ',' << a.trials << ','
        << text::FormatDouble(pick(a.label_accuracy)) << ','
        << text::FormatDouble(pick(a.voted_label_accuracy)) << ','
        << text::FormatDouble(pick(a.knn_test_accuracy)) << ','
        << text::FormatDouble(pick(a.q_pos)) << ','
        << text::FormatDouble(pick(a.q_amb)) << '\n';
  };
  row("mean", [](const MetricSummary& s) { return s.mean; });
  row("std", [](const MetricSummary& s) { return s.std; });
}

}  // namespace pairlabel
