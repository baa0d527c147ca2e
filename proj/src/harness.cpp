#include "zeno/harness.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "zeno/analytic.hpp"

namespace zeno {

unsigned worker_threads() {
  if (const char* env = std::getenv("ZENO_CHAIN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

SimulationResult run_simulation(const ChainSpec& spec, std::optional<double> t_max, int steps) {
  ChainHamiltonians chain = build_chain(spec);
  const Index n = chain.size();
  const SymTridiagd watch = chain.watch_with_shift();
  const SpectralDecompositiond dw = eig_sym_tridiag(watch);
  ProjectorSet levels = group_levels(dw, default_grouping_tolerance(dw));
  const DenseMatrix p0 = levels.zero_projector();

  std::optional<Eigen::VectorXd> mid;
  if (n % 2 == 1 && !spec.is_modified()) mid = analytic::phi_mid(spec.n_sites);

  const State psi0 = basis_state<double>(n, 0);
  const TimeGrid grid(t_max.value_or(default_window(spec)), steps);
  EvolutionTrace trace = simulate(chain.h_total, psi0, grid, p0, mid);
  const LeakageReport leak = measure_leakage(trace);
  QzdClassification cls = classify(watch, chain.h_weak, spec.lambda(), psi0);

  const DenseMatrix h = chain.h_weak.to_dense();
  EffectiveHamiltonian eff = hqzd_order0(p0, h);
  if (cls.order != QzdOrder::zeroth && levels.has_zero_level())
    eff = hqzd_order1(p0, h, reduced_resolvent(levels), spec.lambda());

  return SimulationResult{std::move(chain), std::move(levels), std::move(trace), leak,
                          std::move(cls), std::move(eff)};
}

EffectiveReport effective_hamiltonians(const ChainSpec& spec) {
  const ChainHamiltonians chain = build_chain(spec);
  const SpectralDecompositiond dw = eig_sym_tridiag(chain.watch_with_shift());
  const ProjectorSet levels = group_levels(dw, default_grouping_tolerance(dw));
  const DenseMatrix p0 = levels.zero_projector();
  const DenseMatrix h = chain.h_weak.to_dense();

  EffectiveReport out{hqzd_order0(p0, h), std::nullopt, 0};
  if (levels.has_zero_level()) {
    out.zero_level_dimension = static_cast<int>(levels.zero_level().multiplicity());
    out.order1 = hqzd_order1(p0, h, reduced_resolvent(levels), spec.lambda());
  }
  return out;
}

double fit_slope_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw PreconditionError("fit_slope_through_origin: empty or mismatched data");
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  if (sxx == 0.0) throw PreconditionError("fit_slope_through_origin: all abscissae are zero");
  return sxy / sxx;
}

SweepResult run_sweep(const std::vector<double>& g_list, const std::vector<int>& n_list, double k,
                      int steps, unsigned threads) {
  if (g_list.empty()) throw ValidationError("g-list", "must not be empty");
  if (n_list.empty()) throw ValidationError("n-list", "must not be empty");

  SweepResult out;
  out.g_values = g_list;
  for (double g : g_list) {
    if (!(g > 0.0)) throw ValidationError("g-list", "G values must be positive");
    for (int n : n_list) {
      if (n < 4 || n % 2 != 0) throw ValidationError("n-list", "sweeps need even N >= 4");
      const double lambda_inv = analytic::f_of_N(n) / g;
      if (lambda_inv < 1.0) throw ValidationError("g-list", "implied lambda_inv below 1");
      out.rows.push_back(SweepRow{g, n, lambda_inv, 0.0});
    }
  }

  parallel_for(out.rows.size(), threads, [&](std::size_t i) {
    SweepRow& row = out.rows[i];
    ChainSpec spec;
    spec.n_sites = row.N;
    spec.k = k;
    spec.lambda_inv = row.lambda_inv;
    row.delta = run_simulation(spec, std::nullopt, steps).leakage.delta;
  });

  std::vector<double> x, y;
  const std::size_t per_g = n_list.size();
  for (std::size_t gi = 0; gi < g_list.size(); ++gi) {
    double sum = 0.0;
    for (std::size_t j = 0; j < per_g; ++j) sum += out.rows[gi * per_g + j].delta;
    const double mean = sum / static_cast<double>(per_g);
    double dev = 0.0;
    for (std::size_t j = 0; j < per_g; ++j)
      dev = std::max(dev, std::abs(out.rows[gi * per_g + j].delta - mean) / mean);
    out.mean_delta.push_back(mean);
    out.flatness.push_back(dev);
    if (mean < analytic::kLeakageFitValidity) {
      x.push_back(g_list[gi] * g_list[gi]);
      y.push_back(mean);
    }
  }
  out.fitted_points = x.size();
  out.slope = x.empty() ? std::numeric_limits<double>::quiet_NaN() : fit_slope_through_origin(x, y);
  return out;
}

std::vector<FluctuationRow> run_fluctuation(const FluctuationConfig& config, unsigned threads) {
  if (config.trials < 1) throw ValidationError("trials", "must be at least 1");
  if (config.n_sites % 2 != 0) throw ValidationError("n", "fluctuation runs need an even chain");
  std::vector<FluctuationRow> rows(static_cast<std::size_t>(config.trials));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    ChainSpec spec;
    spec.n_sites = config.n_sites;
    spec.k = config.k;
    spec.lambda_inv = config.lambda_inv;
    spec.fluctuation = Fluctuation{config.amplitude, config.seed + i};

    const SimulationResult sim = run_simulation(spec, std::nullopt, config.steps);
    const DenseMatrix q = reduced_resolvent(sim.levels);
    rows[i] = FluctuationRow{static_cast<int>(i), q(1, config.n_sites - 2),
                             analytic::qtilde_fluctuating_corner(interior_couplings(sim.chain)),
                             sim.leakage.delta};
  });
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace) {
  const Index n = trace.populations.cols();
  os << 't';
  for (Index i = 1; i <= n; ++i) os << ",p_" << i;
  os << ",leakage";
  if (trace.mid_overlap) os << ",mid_overlap";
  os << '\n';
  for (Index s = 0; s < trace.grid.size(); ++s) {
    os << fmt(trace.grid[s]);
    for (Index i = 0; i < n; ++i) os << ',' << fmt(trace.populations(s, i));
    os << ',' << fmt(trace.leakage(s));
    if (trace.mid_overlap) os << ',' << fmt((*trace.mid_overlap)(s));
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "G,N,lambda_inv,delta\n";
  for (const SweepRow& r : result.rows)
    os << fmt(r.G) << ',' << r.N << ',' << fmt(r.lambda_inv) << ',' << fmt(r.delta) << '\n';
}

void write_fluctuation_csv(std::ostream& os, const std::vector<FluctuationRow>& rows) {
  os << "seed_offset,corner_element,delta\n";
  for (const FluctuationRow& r : rows)
    os << r.seed_offset << ',' << fmt(r.corner_element) << ',' << fmt(r.delta) << '\n';
}

nlohmann::json to_json(const QzdClassification& c) {
  return {{"watch_annihilates_initial", c.watch_annihilates_initial},
          {"zero_level_dimension", c.zero_level_dimension},
          {"order", std::string(to_string(c.order))},
          {"prerequisite_I", c.prerequisite_I},
          {"commutator_norms", {{"order0", c.commutator_order0}, {"order1", c.commutator_order1}}},
          {"notes", c.notes}};
}

nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : r.rows)
    rows.push_back({{"G", row.G}, {"N", row.N}, {"lambda_inv", row.lambda_inv}, {"delta", row.delta}});
  nlohmann::json per_g = nlohmann::json::array();
  for (std::size_t i = 0; i < r.g_values.size(); ++i)
    per_g.push_back({{"G", r.g_values[i]}, {"mean_delta", r.mean_delta[i]}, {"flatness", r.flatness[i]}});
  return {{"rows", rows}, {"per_G", per_g}, {"slope", r.slope}, {"fitted_points", r.fitted_points}};
}

nlohmann::json matrix_nonzeros(const DenseMatrix& m, double cutoff) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > cutoff) out.push_back({{"i", i + 1}, {"j", j + 1}, {"value", m(i, j)}});
  return out;
}

nlohmann::json summary_json(const SimulationResult& r) {
  return {{"delta", r.leakage.delta},
          {"attained_at", r.leakage.attained_at},
          {"t_max", r.leakage.t_max},
          {"steps", r.leakage.n_steps},
          {"classification_order", std::string(to_string(r.classification.order))},
          {"effective_order", r.effective.order},
          {"effective_matrix_nonzeros", matrix_nonzeros(r.effective.matrix)}};
}

nlohmann::json to_json(const EffectiveReport& r) {
  auto dense = [](const DenseMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Index j = 0; j < m.cols(); ++j) row.push_back(std::abs(m(i, j)) > 1e-14 ? m(i, j) : 0.0);
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json out = {{"zero_level_dimension", r.zero_level_dimension},
                        {"order0", dense(r.order0.matrix)},
                        {"order0_nonzeros", matrix_nonzeros(r.order0.matrix)},
                        {"eta1_common", r.order0.eta1_common ? nlohmann::json(*r.order0.eta1_common)
                                                             : nlohmann::json(nullptr)}};
  if (r.order1) {
    out["order1"] = dense(r.order1->matrix);
    out["order1_nonzeros"] = matrix_nonzeros(r.order1->matrix);
  }
  return out;
}

}  // namespace zeno
