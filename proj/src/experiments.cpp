#include "bsnoma/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bsnoma/channel.hpp"
#include "bsnoma/rng.hpp"

namespace bsnoma {

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

struct TrialOutcome {
  double total_ee = 0;
  int iterations = 0;
  double cell_infeasible_frac = 0;
  bool any_feasible = false;
  std::vector<double> ee_by_iteration;  // convergence traces only
};

NetworkConfig trial_config(const SweepSpec& spec, double delta, int rsu_count,
                           std::uint64_t trial) {
  NetworkConfig cfg = spec.base_config;
  cfg.num_cells = rsu_count;
  cfg.sic_imperfection = delta;
  cfg.rng_seed = rng::hash(spec.base_config.rng_seed, trial);
  return cfg;
}

TrialOutcome run_trial(const SweepSpec& spec, Baseline baseline, double delta,
                       int rsu_count, double sweep_value, std::uint64_t trial,
                       bool want_trace) {
  NetworkConfig cfg = trial_config(spec, delta, rsu_count, trial);
  switch (spec.kind) {
    case SweepKind::ee_vs_power: cfg.power_budget_dbm = sweep_value; break;
    case SweepKind::ee_vs_rmin: cfg.qos_rate_min = sweep_value; break;
    case SweepKind::convergence: break;  // sweep values index iterations
  }
  const auto channels = sample_network(cfg);
  const auto forced = baseline == Baseline::nbs ? std::optional<double>(0.0) : std::nullopt;
  const NetworkSolve net = solve_network(channels, cfg, spec.settings, forced);

  TrialOutcome out;
  out.total_ee = net.total_ee;
  out.iterations = net.iterations;
  out.any_feasible = net.feasible_cells > 0;
  out.cell_infeasible_frac =
      1.0 - double(net.feasible_cells) / double(channels.size());
  if (want_trace) {
    // EE reached by each cumulative iteration count, held after convergence.
    const int last = net.trace.empty() ? 0 : net.trace.back().cumulative_iterations;
    out.ee_by_iteration.assign(std::max<std::size_t>(1, last), 0.0);
    for (const auto& t : net.trace) {
      for (int k = t.cumulative_iterations; k <= last; ++k)
        out.ee_by_iteration[k - 1] = t.total_ee;
    }
    // Iterations before the first sweep completes see the first total.
    if (!net.trace.empty()) {
      for (int k = 1; k < net.trace.front().cumulative_iterations; ++k)
        out.ee_by_iteration[k - 1] = net.trace.front().total_ee;
    }
  }
  return out;
}

template <typename Fn>
void parallel_for_trials(int trials, Fn&& fn) {
  const int width = std::min(parallel_width(), trials);
  if (width <= 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(width);
  for (int w = 0; w < width; ++w) {
    pool.emplace_back([&, w] {
      for (int t = w; t < trials; t += width) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

ResultRow reduce_point(const SweepSpec& spec, Baseline baseline, double delta,
                       int rsu_count, double sweep_value,
                       const std::vector<TrialOutcome>& outcomes) {
  ResultRow row;
  row.kind = spec.kind;
  row.sweep_value = sweep_value;
  row.baseline = baseline;
  row.delta = delta;
  row.rsu_count = rsu_count;
  row.seed = spec.base_config.rng_seed;
  row.trials = int(outcomes.size());

  double ee_sum = 0, ee_sq = 0, iters = 0, infeas = 0;
  int included = 0;
  for (const auto& o : outcomes) {
    iters += o.iterations;
    infeas += o.cell_infeasible_frac;
    if (o.any_feasible) {
      ee_sum += o.total_ee;
      ee_sq += o.total_ee * o.total_ee;
      ++included;
    }
  }
  row.mean_iters = iters / outcomes.size();
  row.infeasible_fraction = infeas / outcomes.size();
  if (included == 0) {
    row.ee_defined = false;
    return row;
  }
  row.mean_ee = ee_sum / included;
  row.std_ee = std::sqrt(std::max(0.0, ee_sq / included - row.mean_ee * row.mean_ee));
  return row;
}

}  // namespace

void SweepSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (sweep_values.empty()) throw std::invalid_argument("sweep: no sweep values");
  for (std::size_t i = 1; i < sweep_values.size(); ++i)
    if (sweep_values[i] <= sweep_values[i - 1])
      throw std::invalid_argument("sweep: values must be strictly increasing");
  if (baselines.empty() || delta_values.empty() || rsu_counts.empty())
    throw std::invalid_argument("sweep: baselines/deltas/rsu counts must be nonempty");
  base_config.validate();
  settings.validate();
}

CurveSamples run_curve(const SweepSpec& spec, Baseline baseline, double delta,
                       int rsu_count) {
  spec.validate();
  CurveSamples out;
  const bool convergence = spec.kind == SweepKind::convergence;

  if (convergence) {
    std::vector<TrialOutcome> outcomes(spec.trials);
    parallel_for_trials(spec.trials, [&](int t) {
      outcomes[t] = run_trial(spec, baseline, delta, rsu_count, 0.0,
                              std::uint64_t(t), true);
    });
    out.sweep_values = spec.sweep_values;
    out.ee.resize(spec.sweep_values.size());
    out.iterations.resize(spec.sweep_values.size());
    out.infeasible_fraction.assign(spec.sweep_values.size(), 0.0);
    for (std::size_t i = 0; i < spec.sweep_values.size(); ++i) {
      const auto k = std::size_t(std::max(1.0, spec.sweep_values[i]));
      for (const auto& o : outcomes) {
        const auto idx = std::min(k, o.ee_by_iteration.size()) - 1;
        out.ee[i].push_back(o.ee_by_iteration.empty() ? 0.0 : o.ee_by_iteration[idx]);
        out.iterations[i].push_back(o.iterations);
      }
      double infeas = 0;
      for (const auto& o : outcomes) infeas += o.cell_infeasible_frac;
      out.infeasible_fraction[i] = infeas / spec.trials;
    }
    return out;
  }

  out.sweep_values = spec.sweep_values;
  out.ee.resize(spec.sweep_values.size());
  out.iterations.resize(spec.sweep_values.size());
  out.infeasible_fraction.assign(spec.sweep_values.size(), 0.0);
  for (std::size_t i = 0; i < spec.sweep_values.size(); ++i) {
    std::vector<TrialOutcome> outcomes(spec.trials);
    parallel_for_trials(spec.trials, [&](int t) {
      outcomes[t] = run_trial(spec, baseline, delta, rsu_count, spec.sweep_values[i],
                              std::uint64_t(t), false);
    });
    double infeas = 0;
    for (const auto& o : outcomes) {
      out.ee[i].push_back(o.any_feasible ? o.total_ee : -1.0);
      out.iterations[i].push_back(o.iterations);
      infeas += o.cell_infeasible_frac;
    }
    out.infeasible_fraction[i] = infeas / spec.trials;
  }
  return out;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  for (int S : spec.rsu_counts) {
    for (double delta : spec.delta_values) {
      for (Baseline b : spec.baselines) {
        if (spec.kind == SweepKind::convergence) {
          std::vector<TrialOutcome> outcomes(spec.trials);
          parallel_for_trials(spec.trials, [&](int t) {
            outcomes[t] = run_trial(spec, b, delta, S, 0.0, std::uint64_t(t), true);
          });
          for (double v : spec.sweep_values) {
            // Reinterpret totals at iteration v, then reduce as usual.
            std::vector<TrialOutcome> at_iter = outcomes;
            for (auto& o : at_iter) {
              const auto k = std::min<std::size_t>(
                  o.ee_by_iteration.size(), std::size_t(std::max(1.0, v)));
              o.total_ee = o.ee_by_iteration.empty() ? 0.0 : o.ee_by_iteration[k - 1];
            }
            rows.push_back(reduce_point(spec, b, delta, S, v, at_iter));
          }
        } else {
          for (double v : spec.sweep_values) {
            std::vector<TrialOutcome> outcomes(spec.trials);
            parallel_for_trials(spec.trials, [&](int t) {
              outcomes[t] = run_trial(spec, b, delta, S, v, std::uint64_t(t), false);
            });
            rows.push_back(reduce_point(spec, b, delta, S, v, outcomes));
          }
        }
      }
    }
  }
  return rows;
}

ShapeReport summarize_shape(std::span<const ResultRow> curve) {
  if (curve.size() < 3)
    throw std::invalid_argument("summarize_shape: need at least 3 points");
  ShapeReport rep;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i].mean_ee > curve[arg].mean_ee) arg = i;
  rep.argmax_index = arg;
  rep.argmax_value = curve[arg].sweep_value;

  auto band = [&](std::size_t i) {
    const int n = std::max(1, curve[i].trials);
    return 2.0 * curve[i].std_ee / std::sqrt(double(n));
  };
  rep.is_unimodal = true;
  for (std::size_t i = 0; i < arg; ++i)
    if (curve[i + 1].mean_ee < curve[i].mean_ee - band(i + 1)) rep.is_unimodal = false;
  for (std::size_t i = arg; i + 1 < curve.size(); ++i)
    if (curve[i + 1].mean_ee > curve[i].mean_ee + band(i + 1)) rep.is_unimodal = false;
  return rep;
}

void add_dominance(ShapeReport& report, std::span<const ResultRow> curve,
                   std::span<const ResultRow> other, const std::string& name) {
  bool dominates = curve.size() == other.size();
  for (std::size_t i = 0; dominates && i < curve.size(); ++i)
    if (curve[i].mean_ee < other[i].mean_ee - 1e-12) dominates = false;
  report.dominance_vs[name] = dominates;
}

namespace {

void append_g9(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += buf;
}

}  // namespace

std::string format_rows(std::span<const ResultRow> rows) {
  std::string out =
      "sweep_kind,sweep_value,baseline,delta,S,mean_ee,std_ee,mean_iters,"
      "infeasible_fraction,seed\n";
  for (const auto& r : rows) {
    out += to_string(r.kind);
    out += ',';
    append_g9(out, r.sweep_value);
    out += ',';
    out += to_string(r.baseline);
    out += ',';
    append_g9(out, r.delta);
    out += ',';
    out += std::to_string(r.rsu_count);
    out += ',';
    if (r.ee_defined) append_g9(out, r.mean_ee);
    out += ',';
    if (r.ee_defined) append_g9(out, r.std_ee);
    out += ',';
    append_g9(out, r.mean_iters);
    out += ',';
    append_g9(out, r.infeasible_fraction);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void write_results(std::span<const ResultRow> rows, const std::string& path,
                   const SweepSpec& spec, const std::vector<std::string>& overrides) {
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_results: cannot open " + path);
    f << format_rows(rows);
    if (!f) throw std::runtime_error("write_results: write failed for " + path);
  }
  nlohmann::json meta;
  meta["artifact_version"] = kArtifactVersion;
  meta["rng_algorithm"] = kRngAlgorithm;
  meta["sweep_kind"] = to_string(spec.kind);
  meta["trials"] = spec.trials;
  meta["sweep_values"] = spec.sweep_values;
  meta["delta_values"] = spec.delta_values;
  meta["rsu_counts"] = spec.rsu_counts;
  std::vector<std::string> bl;
  for (auto b : spec.baselines) bl.push_back(to_string(b));
  meta["baselines"] = bl;
  meta["config"] = {
      {"num_cells", spec.base_config.num_cells},
      {"power_budget_dbm", spec.base_config.power_budget_dbm},
      {"circuit_power_w", spec.base_config.circuit_power_w},
      {"qos_rate_min", spec.base_config.qos_rate_min},
      {"sic_imperfection", spec.base_config.sic_imperfection},
      {"noise_variance_w", spec.base_config.noise_variance_w},
      {"rng_seed", spec.base_config.rng_seed},
      {"direct_gain_mean", spec.base_config.direct_gain_mean},
      {"backscatter_gain_mean", spec.base_config.backscatter_gain_mean},
      {"tag_vehicle_gain_mean", spec.base_config.tag_vehicle_gain_mean},
      {"cross_gain_mean", spec.base_config.cross_gain_mean},
  };
  meta["settings"] = {
      {"dinkelbach_tol", spec.settings.dinkelbach_tol},
      {"max_outer_iters", spec.settings.max_outer_iters},
      {"max_inner_iters", spec.settings.max_inner_iters},
      {"subgradient_step0", spec.settings.subgradient_step0},
      {"step_decay", spec.settings.step_decay},
      {"sweep_rel_tol", spec.settings.sweep_rel_tol},
      {"root_branch", to_string(spec.settings.root_branch)},
  };
  meta["overrides"] = overrides;
  std::ofstream mf(path + ".meta.json", std::ios::binary);
  if (!mf) throw std::runtime_error("write_results: cannot open " + path + ".meta.json");
  mf << meta.dump(2) << '\n';
}

int parallel_width() {
  if (const char* env = std::getenv("BSNOMA_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::ee_vs_power: return "ee_vs_power";
    case SweepKind::ee_vs_rmin: return "ee_vs_rmin";
    case SweepKind::convergence: return "convergence";
  }
  return "ee_vs_power";
}

SweepKind sweep_kind_from_string(const std::string& s) {
  if (s == "ee_vs_power") return SweepKind::ee_vs_power;
  if (s == "ee_vs_rmin") return SweepKind::ee_vs_rmin;
  if (s == "convergence") return SweepKind::convergence;
  throw std::invalid_argument("unknown sweep kind: " + s);
}

std::string to_string(Baseline b) { return b == Baseline::wbs ? "WBS" : "NBS"; }

}  // namespace bsnoma
