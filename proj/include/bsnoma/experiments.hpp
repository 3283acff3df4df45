#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bsnoma/solver.hpp"

namespace bsnoma {

enum class SweepKind { ee_vs_power, ee_vs_rmin, convergence };

std::string to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& s);

enum class Baseline { wbs, nbs };

std::string to_string(Baseline b);

struct SweepSpec {
  SweepKind kind = SweepKind::ee_vs_power;
  std::vector<double> sweep_values;   // strictly increasing
  std::vector<Baseline> baselines = {Baseline::wbs, Baseline::nbs};
  std::vector<double> delta_values = {0.1};
  std::vector<int> rsu_counts = {1};
  int trials = 500;
  NetworkConfig base_config;
  SolverSettings settings;

  void validate() const;
};

struct ResultRow {
  SweepKind kind = SweepKind::ee_vs_power;
  double sweep_value = 0;
  Baseline baseline = Baseline::wbs;
  double delta = 0;
  int rsu_count = 0;
  double mean_ee = 0;
  double std_ee = 0;
  double mean_iters = 0;
  double infeasible_fraction = 0;  // fraction of cell solves marked infeasible
  std::uint64_t seed = 0;
  bool ee_defined = true;          // false when every trial was fully infeasible
  int trials = 0;                  // sample size behind the row (not serialized)
};

// Runs the Monte Carlo sweep. Channel draws per trial depend only on
// (base seed, trial, cell), never on the sweep value, baseline, or delta, so
// curves are comparable per-trial (common random numbers). Trials run in
// parallel when BSNOMA_THREADS allows; aggregation is by trial index, so the
// result is independent of the thread count.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

// Per-trial sweep matrix for one (baseline, delta, S) curve; used by the
// acceptance checks that compare matched trials. ee[i][t] is trial t's total
// EE at sweep value i.
struct CurveSamples {
  std::vector<double> sweep_values;
  std::vector<std::vector<double>> ee;        // [sweep point][trial]
  std::vector<std::vector<int>> iterations;   // [sweep point][trial]
  std::vector<double> infeasible_fraction;    // [sweep point]
};

CurveSamples run_curve(const SweepSpec& spec, Baseline baseline, double delta,
                       int rsu_count);

struct ShapeReport {
  bool is_unimodal = false;
  double argmax_value = 0;
  std::size_t argmax_index = 0;
  // Pointwise dominance of this curve over named comparison curves.
  std::map<std::string, bool> dominance_vs;
};

// Unimodality within a noise band of 2*std/sqrt(trials) around each mean.
// Throws if fewer than 3 points.
ShapeReport summarize_shape(std::span<const ResultRow> curve);

// Adds dominance_vs[name] = (curve >= other pointwise) to a report.
void add_dominance(ShapeReport& report, std::span<const ResultRow> curve,
                   std::span<const ResultRow> other, const std::string& name);

// CSV schema: sweep_kind,sweep_value,baseline,delta,S,mean_ee,std_ee,
// mean_iters,infeasible_fraction,seed. 9 significant digits, LF endings;
// byte-stable for fixed inputs. A sidecar <path>.meta.json records config,
// settings, and the RNG algorithm.
void write_results(std::span<const ResultRow> rows, const std::string& path,
                   const SweepSpec& spec,
                   const std::vector<std::string>& overrides = {});

std::string format_rows(std::span<const ResultRow> rows);

// Parallelism width: BSNOMA_THREADS if set, else hardware concurrency.
int parallel_width();

}  // namespace bsnoma
