#pragma once

#include <span>

#include "bsnoma/channel.hpp"
#include "bsnoma/types.hpp"

namespace bsnoma {

struct EEBreakdown {
  double rate_near = 0;     // bits/s/Hz
  double rate_far = 0;      // bits/s/Hz
  double power_total_w = 0; // p_s(alpha_n + alpha_f) + p_c
  double ee = 0;            // (rate_near + rate_far) / power_total_w
};

struct FeasibilityReport {
  bool c1_ok = false;  // near-vehicle QoS
  bool c2_ok = false;  // far-vehicle QoS
  bool c3_ok = false;  // power budget
  bool c4_ok = false;  // alpha_n + alpha_f <= 1
  bool c5_ok = false;  // beta in [0,1]
  double c1_slack = 0; // LHS - RHS in watts
  double c2_slack = 0;

  bool all() const { return c1_ok && c2_ok && c3_ok && c4_ok && c5_ok; }
};

// Relative tolerance used for boundary equality in constraint checks; the
// closed forms place solutions exactly on active constraints.
inline constexpr double kConstraintTol = 1e-9;

EEBreakdown cell_ee(const CellChannels& ch, const Allocation& a, double delta,
                    double interference_near_w, double interference_far_w,
                    double noise_w, double circuit_w);

// Sum of per-cell EE ratios (the objective sums ratios, not a global ratio).
// Throws on an empty list.
double total_ee(std::span<const EEBreakdown> cells);

// Evaluates C1..C5 in their linearized power-domain forms.
FeasibilityReport check_constraints(const CellChannels& ch, const Allocation& a,
                                    double delta, double interference_near_w,
                                    double interference_far_w, double noise_w,
                                    double qos_rate_min, double power_budget_w);

// F(theta) = rate_sum - theta * power_total.
double dinkelbach_value(double rate_sum, double power_total_w, double theta);

}  // namespace bsnoma
