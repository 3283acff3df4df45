#pragma once

#include <optional>
#include <vector>

#include "bsnoma/objective.hpp"
#include "bsnoma/types.hpp"

namespace bsnoma {

// One cell's subproblem with interference from the other cells frozen.
struct CellInstance {
  CellChannels ch;
  double power_w = 1.0;          // p_s, fixed at the linear budget
  double delta = 0.0;            // SIC residual
  double interference_near_w = 0.0;
  double interference_far_w = 0.0;
  double noise_w = 0.1;
  double qos_rate_min = 0.0;
  double circuit_w = 0.1;

  double rate_sum(double alpha_near, double beta) const;
  double power_total(double alpha_near) const;  // p_s(a_n + a_f) + p_c on a_f = 1 - a_n
  FeasibilityReport feasibility(double alpha_near, double beta) const;
};

// Closed-form reflection coefficient (QoS-driven), clamped to [0,1].
// Returns nullopt when the backscatter path gain is zero (coefficient
// undefined); callers fall back to beta = 0.
std::optional<double> reflection_closed_form(const CellChannels& ch, double alpha_near,
                                             double power_w, double qos_rate_min);

// Symbolic pieces of the alpha_n stationarity condition as typeset
// (Appendix-style groupings). omega_far is a difference of two identical
// effective-gain expressions and is therefore identically zero; the frozen
// form below degenerates to a linear equation.
struct StationarityTerms {
  double lambda_hat = 0;  // effective near gain minus SIC-residual gain
  double omega_hat = 0;   // identically zero as typeset
  double psi_near = 0;    // constant part of the near log denominator
  double psi_far = 0;     // constant part of the far log denominator
  double delta_hat = 0;   // multiplier/theta constant
};

StationarityTerms stationarity_terms(const CellChannels& ch, double beta, double power_w,
                                     double delta, double interference_near_w,
                                     double interference_far_w, double noise_w,
                                     double qos_rate_min, const Multipliers& m);

struct QuadCoeffs {
  double x = 0;
  double y = 0;
  double z = 0;
};

// Coefficients of the quadratic in alpha_n from the Lagrangian stationarity
// condition with alpha_f = 1 - alpha_n substituted and the far-vehicle SINR
// expanded as a function of alpha_n. Any root in (0, 0.5) zeroes
// dL/dalpha_n exactly (see tests/stationarity oracle).
QuadCoeffs quadratic_coefficients(const CellChannels& ch, double beta, double power_w,
                                  double delta, double interference_near_w,
                                  double interference_far_w, double noise_w,
                                  double qos_rate_min, const Multipliers& m);

// Frozen-gamma variant of the same condition: gamma_far is treated as a
// constant, which with omega_hat = 0 makes the equation linear
// (x = -ln2 * delta_hat * lambda_hat * omega_hat = 0).
QuadCoeffs quadratic_coefficients_frozen(const StationarityTerms& t, double gain_near_eff,
                                         double gain_far_eff, double gamma_far);

struct PowerSplit {
  double alpha_near = 0;
  double alpha_far = 0;
  bool from_interior_root = false;  // true when an unclipped quadratic root won
  bool feasible = false;            // some candidate satisfied C1..C5
};

// Picks alpha_n from the quadratic roots (after [.]^+ and the 0.5 clip that
// keeps alpha_n <= alpha_f), the box corners {0, 0.5}, and the C1/C2
// equality points. Under feasible_best the F(theta)-maximizing feasible
// candidate wins; plus/minus return the corresponding root unconditionally.
PowerSplit power_split_closed_form(const QuadCoeffs& q, RootBranchPolicy policy,
                                   const CellInstance& inst, double beta, double theta);

// Projected subgradient step: m <- max(0, m - step * slack).
Multipliers update_multipliers(const Multipliers& m, const FeasibilityReport& rep,
                               double budget_residual_w, double beta, double alpha_sum,
                               double step);

struct CellTraceEntry {
  double theta = 0;
  double dinkelbach_f = 0;
  double ee = 0;
  Allocation alloc;
  FeasibilityReport report;
};

struct CellSolve {
  bool feasible = false;
  bool converged = false;
  int iterations = 0;
  Allocation alloc;
  Multipliers mults;
  EEBreakdown breakdown;
  FeasibilityReport probe_report;  // filled when infeasible
  std::vector<CellTraceEntry> trace;
};

// Alternating closed-form solve of one cell: beta update, alpha update,
// multiplier update, Dinkelbach update. `forced_beta` pins the reflection
// coefficient (used by the no-backscatter baseline). `theta0` warm-starts
// the Dinkelbach parameter.
CellSolve solve_cell(const CellInstance& inst, const SolverSettings& settings,
                     std::optional<double> forced_beta = std::nullopt, double theta0 = 0.0);

struct NetworkTraceEntry {
  int sweep = 0;
  int cumulative_iterations = 0;
  double total_ee = 0;
};

struct NetworkSolve {
  std::vector<CellSolve> cells;
  std::vector<NetworkTraceEntry> trace;
  double total_ee = 0;
  int iterations = 0;      // cumulative per-sweep max of cell Dinkelbach iterations
  int sweeps = 0;
  bool converged = false;
  int feasible_cells = 0;
};

// Gauss-Seidel sweep over cells with interference recomputed from the other
// cells' powers; repeats until total EE stabilizes. Infeasible cells are
// marked and contribute zero EE.
NetworkSolve solve_network(const std::vector<CellChannels>& channels,
                           const NetworkConfig& config, const SolverSettings& settings,
                           std::optional<double> forced_beta = std::nullopt);

}  // namespace bsnoma
