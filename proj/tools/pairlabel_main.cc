// Command-line front end: simulate, active, bounds, gen and serve.
//
// Exit codes: 0 success, 1 configuration or parameter error, 2 runtime error.

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pairlabel/annotate/server.h"
#include "pairlabel/annotate/session.h"
#include "pairlabel/datagen.h"
#include "pairlabel/errors.h"
#include "pairlabel/experiment.h"
#include "pairlabel/text.h"

namespace {

namespace fs = std::filesystem;
namespace ex = pairlabel::experiment;
using pairlabel::ConfigError;
using pairlabel::DataError;
using pairlabel::ParameterError;

constexpr int kConfigExit = 1;
constexpr int kRuntimeExit = 2;

// Flags shared by the labeling-based subcommands.
struct LabelingFlags {
  explicit LabelingFlags(std::size_t default_t) : t(default_t) {}

  std::size_t t;
  std::size_t m = 1;
  std::string policy = "random";
  std::optional<std::size_t> vote_subset;

  void Add(CLI::App& cmd) {
    cmd.add_option("--t", t, "Delegation set size")->capture_default_str();
    cmd.add_option("--m", m, "Ambiguity votes per tournament match")
        ->capture_default_str();
    cmd.add_option("--policy", policy, "Delegation labels: random | recurse")
        ->capture_default_str();
    cmd.add_option("--vote-subset", vote_subset,
                   "Delegation points per positivity vote (default: all)");
  }

  pairlabel::LabelingParams Params() const {
    return {t, m, pairlabel::ParseDelegationPolicy(policy), vote_subset};
  }
};

struct SimulateFlags {
  ex::SimulateLabelConfig config;
  LabelingFlags labeling{35};
  std::optional<fs::path> data;
  fs::path out = "out";
};

struct ActiveFlags {
  ex::ActiveRunConfig config;
  LabelingFlags labeling{3};
  std::optional<fs::path> data;
  std::size_t step_size = 2000;
  std::vector<std::size_t> step_sizes;
  fs::path out = "out";
};

struct BoundsFlags {
  ex::BoundsConfig config;
  std::optional<double> label_error;
  fs::path out = "out";
};

struct GenFlags {
  pairlabel::GaussianMixtureSpec spec;
  fs::path out;
};

struct ServeFlags {
  std::optional<fs::path> data;
  std::size_t n = 200;
  std::uint64_t seed = 0;
  pairlabel::annotate::ServerOptions server;
  std::optional<fs::path> sessions_dir;
  std::optional<std::int64_t> driver_timeout_ms;
};

void AddNoise(CLI::App& cmd, pairlabel::NoiseSpec& noise) {
  cmd.add_option("--eps1", noise.eps1, "Positivity oracle flip probability")
      ->capture_default_str();
  cmd.add_option("--eps2", noise.eps2, "Ambiguity oracle flip probability")
      ->capture_default_str();
}

void AddTrials(CLI::App& cmd, std::size_t& trials, std::uint64_t& seed,
               std::size_t& jobs) {
  cmd.add_option("--trials", trials, "Number of trials")->capture_default_str();
  cmd.add_option("--seed", seed, "Base seed; trial i uses seed + i")
      ->capture_default_str();
  cmd.add_option("--jobs", jobs, "Trials run concurrently")
      ->capture_default_str();
}

int RunSimulate(SimulateFlags& f) {
  f.config.labeling = f.labeling.Params();
  f.config.data.csv = f.data;
  f.config.Validate();
  const auto result = ex::RunSimulateLabel(f.config);
  ex::WriteSimulateLabel(f.out, f.config, result);
  const auto& a = result.aggregate;
  std::cout << "# " << f.config.Echo() << '\n'
            << "label_accuracy " << pairlabel::text::FormatFixed(a.label_accuracy.mean, 4)
            << " +- " << pairlabel::text::FormatFixed(a.label_accuracy.std, 4) << '\n'
            << "knn_test_accuracy "
            << pairlabel::text::FormatFixed(a.knn_test_accuracy.mean, 4) << " +- "
            << pairlabel::text::FormatFixed(a.knn_test_accuracy.std, 4) << '\n'
            << "wrote " << (f.out / "label_trials.csv").string() << " and "
            << (f.out / "label_aggregate.csv").string() << '\n';
  return 0;
}

int RunActiveCmd(ActiveFlags& f) {
  f.config.labeling = f.labeling.Params();
  f.config.data.csv = f.data;
  f.config.step_sizes =
      f.step_sizes.empty() ? std::vector<std::size_t>{f.step_size} : f.step_sizes;
  f.config.Validate();
  const auto result = ex::RunActive(f.config);
  ex::WriteActive(f.out, f.config, result);
  std::cout << "# " << f.config.Echo() << '\n';
  for (const auto& s : ex::SummarizeActive(result)) {
    std::cout << "step " << s.step << " survivors "
              << pairlabel::text::FormatFixed(s.survivors.mean, 1)
              << " mean_acc " << pairlabel::text::FormatFixed(s.mean_acc.mean, 4)
              << '\n';
  }
  std::cout << "wrote " << (f.out / "active_trace.csv").string() << " and "
            << (f.out / "active_summary.csv").string() << '\n';
  return 0;
}

int RunBoundsCmd(BoundsFlags& f) {
  f.config.label_error = f.label_error;
  const auto rows = ex::ComputeBounds(f.config);
  ex::PrintBoundsTable(std::cout, f.config, rows);
  std::error_code ec;
  fs::create_directories(f.out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + f.out.string() + "'");
  std::ofstream csv(f.out / "bounds.csv", std::ios::binary);
  if (!csv) throw ConfigError("cannot write '" + (f.out / "bounds.csv").string() + "'");
  ex::WriteBoundsCsv(csv, f.config, rows);
  return 0;
}

int RunGen(GenFlags& f) {
  const auto data = pairlabel::GenTwoGaussians(f.spec);
  const std::string echo = "config: gen two_gaussians n=" +
                           std::to_string(f.spec.n) +
                           " seed=" + std::to_string(f.spec.seed);
  if (f.out.empty() || f.out == "-") {
    pairlabel::WriteDatasetCsv(std::cout, data, echo);
  } else {
    pairlabel::SaveDatasetCsv(f.out, data, echo);
  }
  return 0;
}

int RunServe(ServeFlags& f) {
  using namespace pairlabel::annotate;
  pairlabel::Dataset data =
      f.data ? pairlabel::LoadDatasetCsv(*f.data)
             : pairlabel::GenTwoGaussians({f.n, f.seed});
  ManagerOptions mo;
  mo.sessions_dir = f.sessions_dir;
  if (f.driver_timeout_ms) {
    if (*f.driver_timeout_ms <= 0) {
      throw ParameterError("driver timeout must be positive");
    }
    mo.answer_timeout = std::chrono::milliseconds(*f.driver_timeout_ms);
  }
  if (f.server.static_dir && !fs::is_directory(*f.server.static_dir)) {
    throw ConfigError("static directory '" + f.server.static_dir->string() +
                      "' does not exist");
  }

  // Signals are taken synchronously by a dedicated thread; block them before
  // any other thread starts so every thread inherits the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionManager manager(mo);
  manager.AddDataset("default", std::move(data));
  const std::size_t resumed = manager.ResumeAll();
  AnnotateServer server(manager, f.server);
  const int port = server.Bind();
  std::cout << "listening on http://" << f.server.host << ':' << port
            << " (dataset 'default', " << resumed << " sessions resumed)"
            << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  server.Serve();
  // Wakes the waiter when the server stopped on its own.
  kill(getpid(), SIGUSR1);
  waiter.join();
  std::cout << "shut down" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise-comparison labeling experiments and annotation service"};
  app.set_config("--config", "", "Key-value config file (TOML/INI)");
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Label simulated data with noisy oracles and score k-NN");
  simulate->add_option("--data", sim.data, "Dataset CSV (default: generate)");
  simulate->add_option("--n", sim.config.data.n, "Generated points per trial")
      ->capture_default_str();
  AddNoise(*simulate, sim.config.noise);
  sim.labeling.Add(*simulate);
  simulate->add_option("--k", sim.config.k, "k-NN neighbors")->capture_default_str();
  simulate->add_option("--train-fraction", sim.config.train_fraction,
                       "Share of points labeled; the rest test k-NN")
      ->capture_default_str();
  AddTrials(*simulate, sim.config.trials, sim.config.base_seed, sim.config.jobs);
  simulate->add_flag("--exact-delegation", sim.config.exact_delegation,
                     "Use the exact most-ambiguous points as delegation set");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();

  ActiveFlags act;
  auto* active = app.add_subcommand(
      "active", "Disagreement-based active learning with comparison labels");
  active->add_option("--data", act.data, "Pool CSV (default: generate)");
  active->add_option("--n", act.config.data.n, "Generated points per trial")
      ->capture_default_str();
  AddNoise(*active, act.config.noise);
  act.labeling.Add(*active);
  active->add_option("--epsilon", act.config.epsilon, "Target precision")
      ->capture_default_str();
  active->add_option("--step-size", act.step_size, "Points drawn per step")
      ->capture_default_str();
  active->add_option("--step-sizes", act.step_sizes,
                     "Points drawn at each step (overrides --step-size)")
      ->delimiter(',');
  active->add_option("--grid", act.config.grid_size, "Linear hypotheses")
      ->capture_default_str();
  active->add_option("--train-fraction", act.config.train_fraction,
                     "Pool share; the rest scores survivors")
      ->capture_default_str();
  AddTrials(*active, act.config.trials, act.config.base_seed, act.config.jobs);
  active->add_option("--out", act.out, "Output directory")->capture_default_str();

  BoundsFlags bnd;
  auto* bounds = app.add_subcommand("bounds", "Print the theoretical bounds");
  bnd.config.eps1.clear();
  bounds->add_option("--eps1", bnd.config.eps1, "Positivity noise levels")
      ->delimiter(',')
      ->default_str("0,0.1,0.2,0.3,0.4");
  bounds->add_option("--eps2", bnd.config.eps2, "Ambiguity noise")
      ->capture_default_str();
  bounds->add_option("--n", bnd.config.n, "Dataset size")->capture_default_str();
  bounds->add_option("--c1", bnd.config.c1, "Constant in the required m")
      ->capture_default_str();
  bounds->add_option("--c2", bnd.config.c2, "Exponent in the failure bound")
      ->capture_default_str();
  bounds->add_option("--k", bnd.config.k, "k-NN neighbors")->capture_default_str();
  bounds->add_option("--omega", bnd.config.omega, "Smoothness constant")
      ->capture_default_str();
  bounds->add_option("--lambda", bnd.config.lambda, "Smoothness exponent")
      ->capture_default_str();
  bounds->add_option("--alpha", bnd.config.alpha, "Margin exponent")
      ->capture_default_str();
  bounds->add_option("--c-alpha", bnd.config.c_alpha, "Margin constant")
      ->capture_default_str();
  bounds->add_option("--delta-prime", bnd.config.delta_prime,
                     "Confidence for the k range")
      ->capture_default_str();
  bounds->add_option("--label-error", bnd.label_error,
                     "Label error fed to the k-NN bound (default: t/n)");
  bounds->add_option("--out", bnd.out, "Output directory")->capture_default_str();

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a two-Gaussian dataset CSV");
  gen_cmd->add_option("--n", gen.spec.n, "Points")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output file (default: stdout)");

  ServeFlags srv;
  auto* serve = app.add_subcommand("serve", "Run the annotation service");
  serve->add_option("--data", srv.data, "Dataset CSV (default: generate)");
  serve->add_option("--n", srv.n, "Generated points")->capture_default_str();
  serve->add_option("--seed", srv.seed, "Generation seed")->capture_default_str();
  serve->add_option("--host", srv.server.host, "Bind address")->capture_default_str();
  serve->add_option("--port", srv.server.port, "Port (0: any free port)")
      ->capture_default_str();
  serve->add_option("--sessions-dir", srv.sessions_dir,
                    "Directory for answer logs; sessions resume from it");
  serve->add_option("--static-dir", srv.server.static_dir,
                    "Directory served at / (questionnaire UI)");
  serve->add_option("--driver-timeout-ms", srv.driver_timeout_ms,
                    "Fail a session whose query waits longer than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (bnd.config.eps1.empty()) bnd.config.eps1 = {0.0, 0.1, 0.2, 0.3, 0.4};
    if (*simulate) return RunSimulate(sim);
    if (*active) return RunActiveCmd(act);
    if (*bounds) return RunBoundsCmd(bnd);
    if (*gen_cmd) return RunGen(gen);
    if (*serve) return RunServe(srv);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeExit;
  }
  return kConfigExit;
}
