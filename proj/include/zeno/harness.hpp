#pragma once

// Scenario runners behind the zeno_chain command line tool: single-chain
// simulation, parameter sweeps of the leakage law, and coupling-fluctuation
// Monte Carlo. Output writers produce the CSV/JSON formats of the tool.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zeno/chain.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/perturbation.hpp"
#include "zeno/qzd.hpp"

namespace zeno {

inline constexpr int kDefaultSteps = 4000;
inline constexpr double kDefaultDelta0 = 0.1;

/// Worker count: ZENO_CHAIN_THREADS when set (>= 1), else hardware concurrency.
unsigned worker_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct SimulationResult {
  ChainHamiltonians chain;
  ProjectorSet levels;
  EvolutionTrace trace;
  LeakageReport leakage;
  QzdClassification classification;
  EffectiveHamiltonian effective;  ///< the term driving the classified order
};

/// Simulates |1> under the chain's total Hamiltonian over `t_max` (or the
/// default one-cycle window) and classifies it.
SimulationResult run_simulation(const ChainSpec& spec, std::optional<double> t_max = {},
                                int steps = kDefaultSteps);

struct EffectiveReport {
  EffectiveHamiltonian order0;
  std::optional<EffectiveHamiltonian> order1;  ///< present when the zero level exists
  int zero_level_dimension = 0;
};
EffectiveReport effective_hamiltonians(const ChainSpec& spec);

struct SweepRow {
  double G = 0.0;
  int N = 0;
  double lambda_inv = 0.0;
  double delta = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;         ///< G-major, N-minor order
  std::vector<double> g_values;
  std::vector<double> mean_delta;     ///< per G
  std::vector<double> flatness;       ///< per G: max |delta - mean| / mean
  double slope = 0.0;                 ///< through-origin fit of mean_delta vs G^2 (mean < 0.2)
  std::size_t fitted_points = 0;
};

/// Least squares y = s x through the origin.
double fit_slope_through_origin(const std::vector<double>& x, const std::vector<double>& y);

/// For every (G, N): lambda = G / f(N), simulate the even chain over the
/// default window and record delta.
SweepResult run_sweep(const std::vector<double>& g_list, const std::vector<int>& n_list,
                      double k = 1.0, int steps = kDefaultSteps, unsigned threads = 1);

struct FluctuationConfig {
  int n_sites = 10;
  double k = 1.0;
  double lambda_inv = 20.0;
  double amplitude = 0.05;
  int trials = 100;
  std::uint64_t seed = 0;
  int steps = kDefaultSteps;
};

struct FluctuationRow {
  int seed_offset = 0;
  double corner_element = 0.0;  ///< <2|Qtilde|N-1> from the eigenprojectors
  double corner_closed_form = 0.0;
  double delta = 0.0;
};

std::vector<FluctuationRow> run_fluctuation(const FluctuationConfig& config, unsigned threads = 1);

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace);
void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_fluctuation_csv(std::ostream& os, const std::vector<FluctuationRow>& rows);

nlohmann::json to_json(const QzdClassification& c);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json summary_json(const SimulationResult& r);
nlohmann::json to_json(const EffectiveReport& r);

/// Nonzero entries (|value| > cutoff) as {"i","j","value"} with 1-based sites.
nlohmann::json matrix_nonzeros(const DenseMatrix& m, double cutoff = 1e-12);

}  // namespace zeno
