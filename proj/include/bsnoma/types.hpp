#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsnoma {

// Scenario parameters for one multi-cell realization. Powers in the config
// are kept in the units the scenario is usually quoted in (dBm for the
// budget, watts elsewhere).
struct NetworkConfig {
  int num_cells = 1;                  // S
  double power_budget_dbm = 30.0;     // P_tot per RSU
  double circuit_power_w = 0.1;       // p_c
  double qos_rate_min = 0.5;          // R_min, bits/s/Hz
  double sic_imperfection = 0.1;      // delta in [0,1]
  double noise_variance_w = 0.1;      // sigma^2
  std::uint64_t rng_seed = 1;

  // Mean squared gain per link class. Unit mean is the baseline Rayleigh
  // model; the multipliers exist for sensitivity studies and for scenarios
  // where cross-cell links are materially weaker than in-cell links.
  double direct_gain_mean = 1.0;        // RSU -> own vehicles
  double backscatter_gain_mean = 1.0;   // RSU -> tag
  double tag_vehicle_gain_mean = 1.0;   // tag -> vehicles
  double cross_gain_mean = 1.0;         // neighbor RSU -> vehicles

  static constexpr int vehicles_per_cell = 2;
  static constexpr int backscatter_per_cell = 1;

  void validate() const {
    if (num_cells < 1) throw std::invalid_argument("num_cells must be >= 1");
    if (circuit_power_w <= 0) throw std::invalid_argument("circuit_power_w must be > 0");
    if (qos_rate_min < 0) throw std::invalid_argument("qos_rate_min must be >= 0");
    if (sic_imperfection < 0 || sic_imperfection > 1)
      throw std::invalid_argument("sic_imperfection must be in [0,1]");
    if (noise_variance_w <= 0) throw std::invalid_argument("noise_variance_w must be > 0");
    if (direct_gain_mean <= 0 || backscatter_gain_mean <= 0 || tag_vehicle_gain_mean <= 0 ||
        cross_gain_mean <= 0)
      throw std::invalid_argument("gain means must be > 0");
  }
};

// Squared channel gains for one cell. Direct vehicle gains are stored
// sorted so g_near_sq >= g_far_sq always holds.
struct CellChannels {
  double g_near_sq = 0;   // |g_{n,s}|^2
  double g_far_sq = 0;    // |g_{f,s}|^2
  double g_tag_sq = 0;    // |g_{k,s}|^2, RSU -> tag
  double h_near_sq = 0;   // |h_{n,k}|^2, tag -> near vehicle
  double h_far_sq = 0;    // |h_{f,k}|^2, tag -> far vehicle
  std::vector<double> cross_near;  // |g_{n,s'}|^2 for s' != s, ascending s'
  std::vector<double> cross_far;   // |g_{f,s'}|^2 for s' != s, ascending s'
};

// Per-cell decision variables.
struct Allocation {
  double alpha_near = 0;   // alpha_{n,s}
  double alpha_far = 0;    // alpha_{f,s}
  double beta = 0;         // beta_{k,s}
  double power_w = 0;      // p_s
};

// Lagrange multipliers plus the Dinkelbach parameter. All multipliers stay
// non-negative under the projected subgradient update.
struct Multipliers {
  double mu_near = 0;   // C1 dual
  double mu_far = 0;    // C2 dual
  double lambda = 0;    // C3 dual
  double tau = 0;       // C5 upper-bound dual
  double eta = 0;       // C4 dual
  double theta = 0;     // Dinkelbach parameter
};

enum class RootBranchPolicy { feasible_best, plus, minus };

struct SolverSettings {
  double dinkelbach_tol = 1e-4;     // on |F(theta)|
  int max_outer_iters = 50;         // Dinkelbach iterations per cell solve
  int max_inner_iters = 50;         // network sweeps
  double subgradient_step0 = 0.1;   // step_t = step0 / sqrt(t)
  double step_decay = 1.0;
  double sweep_rel_tol = 1e-4;      // relative change of total EE between sweeps
  RootBranchPolicy root_branch = RootBranchPolicy::feasible_best;

  void validate() const {
    if (dinkelbach_tol <= 0 || sweep_rel_tol <= 0)
      throw std::invalid_argument("tolerances must be > 0");
    if (max_outer_iters < 1 || max_inner_iters < 1)
      throw std::invalid_argument("iteration caps must be >= 1");
    if (step_decay <= 0 || step_decay > 1)
      throw std::invalid_argument("step_decay must be in (0,1]");
  }
};

std::string to_string(RootBranchPolicy p);
RootBranchPolicy root_branch_from_string(const std::string& s);

}  // namespace bsnoma
