#include "pairlabel/experiment.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pairlabel/datagen.h"
#include "pairlabel/errors.h"
#include "pairlabel/knn.h"
#include "pairlabel/rng.h"
#include "pairlabel/text.h"
#include "pairlabel/topt.h"

namespace pairlabel::experiment {
namespace {

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

void PrepareDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + dir.string() +
                      "': " + ec.message());
  }
}

std::string Num(double v) { return text::FormatDouble(v); }

std::string JoinSizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string EchoLabeling(const LabelingParams& p) {
  std::string out = "t=" + std::to_string(p.t) + " m=" + std::to_string(p.m) +
                    " policy=" + std::string(ToString(p.delegation_policy));
  if (p.vote_subset_size) {
    out += " vote_subset=" + std::to_string(*p.vote_subset_size);
  }
  return out;
}

// Truth for test points: the recorded label, else the Bayes label.
Dataset WithTestLabels(Dataset data) {
  if (data.HasTrueLabels()) return data;
  std::vector<DataPoint> points(data.points().begin(), data.points().end());
  for (auto& p : points) {
    if (!p.true_label) {
      if (!p.eta) throw ConfigError("point without label or eta in test split");
      p.true_label = BayesLabel(*p.eta);
    }
  }
  return Dataset(std::move(points));
}

}  // namespace

Dataset DataSource::Load(std::uint64_t trial_seed) const {
  if (csv) return LoadDatasetCsv(*csv);
  return GenTwoGaussians({n, trial_seed});
}

std::string DataSource::Describe() const {
  if (csv) return "csv=" + csv->string();
  return "two_gaussians n=" + std::to_string(n);
}

void SimulateLabelConfig::Validate() const {
  noise.Validate();
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (k < 1) throw ParameterError("k must be at least 1");
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw ParameterError("train fraction must lie in (0, 1)");
  }
  if (data.csv && !std::filesystem::exists(*data.csv)) {
    throw ConfigError("dataset file '" + data.csv->string() + "' does not exist");
  }
  if (!data.csv && data.n < 2) throw ParameterError("n must be at least 2");
  if (!data.csv) {
    labeling.Validate(static_cast<std::size_t>(
        std::llround(static_cast<double>(data.n) * train_fraction)));
  }
}

std::string SimulateLabelConfig::Echo() const {
  std::ostringstream s;
  s << "simulate " << data.Describe() << " eps1=" << Num(noise.eps1)
    << " eps2=" << Num(noise.eps2) << ' ' << EchoLabeling(labeling)
    << " k=" << k << " train_fraction=" << Num(train_fraction)
    << " trials=" << trials << " seed=" << base_seed
    << " exact_delegation=" << (exact_delegation ? 1 : 0);
  return s.str();
}

TrialReport RunLabelTrial(const SimulateLabelConfig& config, std::size_t trial) {
  const std::uint64_t seed = Rng::TrialSeed(config.base_seed, trial);
  const Rng root(seed);
  const Dataset data = config.data.Load(seed);
  Rng split_rng = root.Fork(streams::kSplit);
  const Split split = TrainTestSplit(data.size(), config.train_fraction, split_rng);
  const Dataset train = data.Subset(split.train);
  const Dataset test = WithTestLabels(data.Subset(split.test));

  SimulatedOracle oracle(config.noise, root.Fork(streams::kOracle));
  Rng alg_rng = root.Fork(streams::kAlgorithm);
  LabelSet labels;
  if (config.exact_delegation) {
    const std::vector<PointId> exact = ExactTopAmbiguous(train, config.labeling.t);
    labels = LabelWithDelegation(train, exact, config.labeling, oracle, alg_rng);
  } else {
    labels = InferLabels(train, config.labeling, oracle, alg_rng);
  }

  const std::vector<Sign> truth = BayesLabels(train);
  TrialReport report;
  report.seed = seed;
  report.label_accuracy = LabelAccuracy(labels, truth, LabelScope::kAll);
  report.voted_label_accuracy =
      LabelAccuracy(labels, truth, LabelScope::kVotedOnly);
  const KnnModel model = KnnModel::FromDataset(train, labels.labels, config.k);
  report.knn_test_accuracy = Evaluate(model, test);
  report.q_pos = labels.queries.count_positivity;
  report.q_amb = labels.queries.count_ambiguity;
  report.params = EchoLabeling(config.labeling) + " eps1=" +
                  Num(config.noise.eps1) + " eps2=" + Num(config.noise.eps2) +
                  " k=" + std::to_string(config.k);
  return report;
}

SimulateLabelResult RunSimulateLabel(const SimulateLabelConfig& config) {
  config.Validate();
  SimulateLabelResult result;
  result.trials.resize(config.trials);
  ParallelFor(config.trials, config.jobs, [&](std::size_t i) {
    result.trials[i] = RunLabelTrial(config, i);
  });
  result.aggregate = AggregateReports(result.trials);
  return result;
}

void WriteSimulateLabel(const std::filesystem::path& out_dir,
                        const SimulateLabelConfig& config,
                        const SimulateLabelResult& result) {
  PrepareDir(out_dir);
  const std::string echo = "config: " + config.Echo();
  {
    auto out = OpenOutput(out_dir / "label_trials.csv");
    WriteTrialReportsCsv(out, result.trials, echo);
  }
  {
    auto out = OpenOutput(out_dir / "label_aggregate.csv");
    WriteAggregateCsv(out, result.aggregate, echo);
  }
}

void ActiveRunConfig::Validate() const {
  noise.Validate();
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (grid_size < 1) throw ParameterError("grid size must be at least 1");
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw ParameterError("train fraction must lie in (0, 1)");
  }
  if (data.csv && !std::filesystem::exists(*data.csv)) {
    throw ConfigError("dataset file '" + data.csv->string() + "' does not exist");
  }
  ActiveConfig probe;
  probe.epsilon = epsilon;
  probe.step_sizes = step_sizes;
  probe.hypotheses = LinearGrid(1);
  probe.labeling = labeling;
  probe.Validate();
}

std::string ActiveRunConfig::Echo() const {
  std::ostringstream s;
  s << "active " << data.Describe() << " eps1=" << Num(noise.eps1)
    << " eps2=" << Num(noise.eps2) << " epsilon=" << Num(epsilon)
    << " step_sizes=" << JoinSizes(step_sizes) << " grid=" << grid_size << ' '
    << EchoLabeling(labeling) << " train_fraction=" << Num(train_fraction)
    << " trials=" << trials << " seed=" << base_seed;
  return s.str();
}

ActiveResult RunActiveTrial(const ActiveRunConfig& config, std::size_t trial) {
  const std::uint64_t seed = Rng::TrialSeed(config.base_seed, trial);
  const Rng root(seed);
  const Dataset data = config.data.Load(seed);
  if (data.dim() != 2) {
    throw ConfigError("the linear hypothesis grid needs 2-D features");
  }
  Rng split_rng = root.Fork(streams::kSplit);
  const Split split = TrainTestSplit(data.size(), config.train_fraction, split_rng);
  std::vector<DataPoint> pool;
  pool.reserve(split.train.size());
  for (PointId id : split.train) pool.push_back(data[id]);
  PoolSource source(std::move(pool));
  const Dataset test = WithTestLabels(data.Subset(split.test));

  ActiveConfig active;
  active.epsilon = config.epsilon;
  active.step_sizes = config.step_sizes;
  active.hypotheses = LinearGrid(config.grid_size);
  active.labeling = config.labeling;

  SimulatedOracle oracle(config.noise, root.Fork(streams::kOracle));
  Rng alg_rng = root.Fork(streams::kAlgorithm);
  return RunDbal(active, oracle, source, test, alg_rng);
}

ActiveRunResult RunActive(const ActiveRunConfig& config) {
  config.Validate();
  ActiveRunResult result;
  result.trials.resize(config.trials);
  ParallelFor(config.trials, config.jobs, [&](std::size_t i) {
    result.trials[i] = RunActiveTrial(config, i);
  });
  return result;
}

std::vector<StepSummary> SummarizeActive(const ActiveRunResult& result) {
  std::vector<StepSummary> out;
  if (result.trials.empty()) return out;
  const std::size_t steps = result.trials.front().trace.size();
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<double> region, survivors, acc, q_pos, q_amb;
    for (const auto& trial : result.trials) {
      const StepTrace& row = trial.trace.at(s);
      region.push_back(static_cast<double>(row.region_size));
      survivors.push_back(static_cast<double>(row.survivors));
      acc.push_back(row.mean_acc);
      q_pos.push_back(static_cast<double>(row.q_pos));
      q_amb.push_back(static_cast<double>(row.q_amb));
    }
    StepSummary summary;
    summary.step = s + 1;
    summary.n_i = result.trials.front().trace[s].n_i;
    summary.region_size = Summarize(region);
    summary.survivors = Summarize(survivors);
    summary.mean_acc = Summarize(acc);
    summary.q_pos = Summarize(q_pos);
    summary.q_amb = Summarize(q_amb);
    out.push_back(summary);
  }
  return out;
}

void WriteActive(const std::filesystem::path& out_dir,
                 const ActiveRunConfig& config, const ActiveRunResult& result) {
  PrepareDir(out_dir);
  const std::string echo = "# config: " + config.Echo() + "\n";
  {
    auto out = OpenOutput(out_dir / "active_trace.csv");
    out << echo;
    WriteTraceCsvHeader(out, true);
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
      for (const auto& row : result.trials[i].trace) {
        WriteTraceCsvRow(out, row, i);
      }
    }
  }
  {
    auto out = OpenOutput(out_dir / "active_summary.csv");
    out << echo;
    out << "step,n_i,region_size_mean,survivors_mean,survivors_std,"
           "mean_acc_mean,mean_acc_std,q_pos_mean,q_amb_mean\n";
    for (const auto& s : SummarizeActive(result)) {
      out << s.step << ',' << s.n_i << ',' << Num(s.region_size.mean) << ','
          << Num(s.survivors.mean) << ',' << Num(s.survivors.std) << ','
          << Num(s.mean_acc.mean) << ',' << Num(s.mean_acc.std) << ','
          << Num(s.q_pos.mean) << ',' << Num(s.q_amb.mean) << '\n';
    }
  }
}

void BoundsConfig::Validate() const {
  if (eps1.empty()) throw ParameterError("at least one eps1 value is required");
  for (double e : eps1) {
    if (!(e >= 0.0 && e < 0.5)) {
      throw ParameterError("eps1 must lie in [0, 0.5), got " + Num(e));
    }
  }
  if (!(eps2 >= 0.0 && eps2 < 0.5)) {
    throw ParameterError("eps2 must lie in [0, 0.5), got " + Num(eps2));
  }
  if (n < 3) throw ParameterError("n must be at least 3");
  if (label_error && !(*label_error >= 0.0 && *label_error <= 1.0)) {
    throw ParameterError("label error must lie in [0, 1]");
  }
}

std::string BoundsConfig::Echo() const {
  std::ostringstream s;
  s << "bounds eps1=";
  for (std::size_t i = 0; i < eps1.size(); ++i) s << (i ? " " : "") << Num(eps1[i]);
  s << " eps2=" << Num(eps2) << " n=" << n << " C1=" << Num(c1)
    << " C2=" << Num(c2) << " k=" << k << " omega=" << Num(omega)
    << " lambda=" << Num(lambda) << " alpha=" << Num(alpha)
    << " C_alpha=" << Num(c_alpha) << " delta_prime=" << Num(delta_prime);
  if (label_error) s << " label_error=" << Num(*label_error);
  return s.str();
}

std::vector<BoundsRow> ComputeBounds(const BoundsConfig& config) {
  config.Validate();
  std::vector<BoundsRow> rows;
  for (double e : config.eps1) {
    BoundsRow row;
    row.eps1 = e;
    row.t = bounds::RequiredT(e);
    if (config.n <= row.t) {
      throw ParameterError("n must exceed t=" + std::to_string(row.t));
    }
    row.hoeffding_a = bounds::HoeffdingA(row.t, e);
    row.failure_delta = bounds::FailureDelta(config.n, row.t, e, config.c2);
    row.m = bounds::RequiredM(config.n, row.t, config.eps2, config.c1);
    row.label_error = config.label_error.value_or(
        static_cast<double>(row.t) / static_cast<double>(config.n));
    bounds::KnnBoundParams kp;
    kp.label_error = row.label_error;
    kp.k = config.k;
    kp.n = config.n;
    kp.omega = config.omega;
    kp.lambda = config.lambda;
    kp.alpha = config.alpha;
    kp.c_alpha = config.c_alpha;
    kp.delta_prime = config.delta_prime;
    row.knn = bounds::KnnExcessRiskBound(kp);
    rows.push_back(row);
  }
  return rows;
}

void PrintBoundsTable(std::ostream& out, const BoundsConfig& config,
                      const std::vector<BoundsRow>& rows) {
  out << "# " << config.Echo() << '\n';
  out << std::left << std::setw(7) << "eps1" << std::setw(6) << "t"
      << std::setw(12) << "a" << std::setw(12) << "delta" << std::setw(6)
      << "m" << std::setw(12) << "label_err" << std::setw(14) << "knn_excess"
      << "k_valid\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(7) << text::FormatFixed(r.eps1, 3)
        << std::setw(6) << r.t << std::setw(12)
        << text::FormatFixed(r.hoeffding_a, 6) << std::setw(12)
        << text::FormatFixed(r.failure_delta, 6) << std::setw(6) << r.m
        << std::setw(12) << text::FormatFixed(r.label_error, 6)
        << std::setw(14) << text::FormatFixed(r.knn.excess_risk, 6)
        << (r.knn.k_in_valid_range ? "yes" : "no") << '\n';
  }
}

void WriteBoundsCsv(std::ostream& out, const BoundsConfig& config,
                    const std::vector<BoundsRow>& rows) {
  out << "# config: " << config.Echo() << '\n';
  out << "eps1,eps2,n,t,hoeffding_a,failure_delta,m,label_error,"
         "knn_excess_risk,k_valid\n";
  for (const auto& r : rows) {
    out << Num(r.eps1) << ',' << Num(config.eps2) << ',' << config.n << ','
        << r.t << ',' << Num(r.hoeffding_a) << ',' << Num(r.failure_delta)
        << ',' << r.m << ',' << Num(r.label_error) << ','
        << Num(r.knn.excess_risk) << ',' << (r.knn.k_in_valid_range ? 1 : 0)
        << '\n';
  }
}

}  // namespace pairlabel::experiment
