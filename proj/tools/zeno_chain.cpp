// zeno_chain: command line front end for tight-binding chain Zeno dynamics.
//
//   zeno_chain simulate  --n 4 --lambda-inv 20 --out trace.csv
//   zeno_chain classify  --n 5 --lambda-inv 20 --delta-omega 20
//   zeno_chain effective --n 6
//   zeno_chain bound     --n 100 --delta0 0.1
//   zeno_chain sweep     --g-list 0.05,0.1 --n-list 4,6,8 --out sweep.csv
//   zeno_chain fluctuate --n 10 --amplitude 0.05 --trials 100 --seed 7
//
// Options can also come from `--config file` holding key=value lines (keys are
// the long option names without dashes); command line flags take precedence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "zeno/analytic.hpp"
#include "zeno/harness.hpp"

namespace {

struct Options {
  int n = 4;
  double k = 1.0;
  double lambda_inv = 20.0;
  std::optional<double> delta_omega;
  int shift_site = 2;
  double delta0 = zeno::kDefaultDelta0;
  std::optional<double> t_max;
  int steps = zeno::kDefaultSteps;
  std::vector<double> g_list{0.05, 0.1, 0.15, 0.2};
  std::vector<int> n_list{4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
  double amplitude = 0.05;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string out;
};

zeno::ChainSpec chain_spec(const Options& o) {
  zeno::ChainSpec spec;
  spec.n_sites = o.n;
  spec.k = o.k;
  spec.lambda_inv = o.lambda_inv;
  spec.delta_omega = o.delta_omega;
  spec.shift_site = o.shift_site;
  return spec;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw zeno::IoError("cannot open output file '" + path + "'");
  return os;
}

void finish_output(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw zeno::IoError("failed writing '" + path + "'");
}

void add_chain_options(CLI::App& app, Options& o) {
  app.add_option("--n", o.n, "number of sites N (>= 4)")->capture_default_str();
  app.add_option("--k", o.k, "weak coupling k")->capture_default_str();
  app.add_option("--lambda-inv", o.lambda_inv, "strong/weak coupling ratio")->capture_default_str();
  app.add_option("--delta-omega", o.delta_omega, "on-site shift on the shift site (absent by default)");
  app.add_option("--shift-site", o.shift_site, "even interior site carrying the shift")->capture_default_str();
}

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"Coherent quantum Zeno dynamics on tight-binding chains"};
  app.set_config("--config", "", "file of key=value lines");
  app.require_subcommand(1);
  app.fallthrough();

  add_chain_options(app, o);
  app.add_option("--delta0", o.delta0, "leakage threshold")->capture_default_str();
  app.add_option("--t-max", o.t_max, "observation window (default: one effective cycle)");
  app.add_option("--steps", o.steps, "time steps in the window")->capture_default_str();
  app.add_option("--g-list", o.g_list, "sweep values of G")->delimiter(',')->capture_default_str();
  app.add_option("--n-list", o.n_list, "sweep chain lengths")->delimiter(',')->capture_default_str();
  app.add_option("--amplitude", o.amplitude, "relative coupling fluctuation")->capture_default_str();
  app.add_option("--trials", o.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--seed", o.seed, "base RNG seed")->capture_default_str();
  app.add_option("--out", o.out, "output CSV path");

  auto* simulate = app.add_subcommand("simulate", "evolve |1> under H_tot; trace CSV + JSON summary");
  auto* classify = app.add_subcommand("classify", "coherent-QZD order of |1> as JSON");
  auto* effective = app.add_subcommand("effective", "order-0 and order-1 effective Hamiltonians as JSON");
  auto* bound = app.add_subcommand("bound", "strength ratio needed for leakage below delta0");
  auto* sweep = app.add_subcommand("sweep", "leakage sweep over G and N; CSV + JSON fit");
  auto* fluctuate = app.add_subcommand("fluctuate", "coupling-fluctuation Monte Carlo CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(zeno::ExitCode::validation);
  }

  const unsigned threads = zeno::worker_threads();

  if (*simulate) {
    const zeno::SimulationResult r = zeno::run_simulation(chain_spec(o), o.t_max, o.steps);
    const std::string path = o.out.empty() ? "trace.csv" : o.out;
    std::ofstream os = open_output(path);
    zeno::write_trace_csv(os, r.trace);
    finish_output(os, path);
    std::cout << zeno::summary_json(r).dump(2) << '\n';
  } else if (*classify) {
    const zeno::ChainSpec spec = chain_spec(o);
    const zeno::ChainHamiltonians chain = zeno::build_chain(spec);
    const auto c = zeno::classify(chain.watch_with_shift(), chain.h_weak, spec.lambda(),
                                  zeno::basis_state<double>(chain.size(), 0));
    std::cout << zeno::to_json(c).dump(2) << '\n';
  } else if (*effective) {
    std::cout << zeno::to_json(zeno::effective_hamiltonians(chain_spec(o))).dump(2) << '\n';
  } else if (*bound) {
    std::printf("%.6g\n", zeno::analytic::lambda_bound(o.n, o.delta0));
  } else if (*sweep) {
    const zeno::SweepResult r = zeno::run_sweep(o.g_list, o.n_list, o.k, o.steps, threads);
    const std::string path = o.out.empty() ? "sweep.csv" : o.out;
    std::ofstream os = open_output(path);
    zeno::write_sweep_csv(os, r);
    finish_output(os, path);
    std::cout << zeno::to_json(r).dump(2) << '\n';
  } else if (*fluctuate) {
    if (!(o.amplitude >= 0.0 && o.amplitude <= 0.2))
      throw zeno::ValidationError("amplitude", "must lie in [0, 0.2]");
    const zeno::FluctuationConfig cfg{o.n, o.k, o.lambda_inv, o.amplitude, o.trials, o.seed, o.steps};
    const auto rows = zeno::run_fluctuation(cfg, threads);
    const std::string path = o.out.empty() ? "fluctuate.csv" : o.out;
    std::ofstream os = open_output(path);
    zeno::write_fluctuation_csv(os, rows);
    finish_output(os, path);
    double mean = 0.0;
    for (const auto& row : rows) mean += row.corner_element;
    mean /= static_cast<double>(rows.size());
    std::cout << nlohmann::json{{"trials", rows.size()}, {"mean_corner_element", mean}}.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const zeno::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(zeno::ExitCode::numerical);
  }
}
