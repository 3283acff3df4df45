#include "bsnoma/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace bsnoma {

EEBreakdown cell_ee(const CellChannels& ch, const Allocation& a, double delta,
                    double interference_near_w, double interference_far_w,
                    double noise_w, double circuit_w) {
  EEBreakdown out;
  out.rate_near = rate(sinr_near(ch, a, delta, interference_near_w, noise_w));
  out.rate_far = rate(sinr_far(ch, a, interference_far_w, noise_w));
  out.power_total_w = a.power_w * (a.alpha_near + a.alpha_far) + circuit_w;
  out.ee = (out.rate_near + out.rate_far) / out.power_total_w;
  return out;
}

double total_ee(std::span<const EEBreakdown> cells) {
  if (cells.empty()) throw std::invalid_argument("total_ee: empty cell list");
  double sum = 0;
  for (const auto& c : cells) sum += c.ee;
  return sum;
}

FeasibilityReport check_constraints(const CellChannels& ch, const Allocation& a,
                                    double delta, double interference_near_w,
                                    double interference_far_w, double noise_w,
                                    double qos_rate_min, double power_budget_w) {
  FeasibilityReport rep;
  const double gap = std::pow(2.0, qos_rate_min) - 1.0;
  const double gain_n = effective_gain_near(ch, a.beta);
  const double gain_f = effective_gain_far(ch, a.beta);

  const double c1_rhs =
      gap * (ch.g_near_sq * a.power_w * a.alpha_far * delta + interference_near_w + noise_w);
  rep.c1_slack = a.power_w * a.alpha_near * gain_n - c1_rhs;
  rep.c1_ok = rep.c1_slack >= -kConstraintTol * std::max(1.0, std::abs(c1_rhs));

  const double c2_rhs =
      gap * (a.power_w * a.alpha_near * gain_f + interference_far_w + noise_w);
  rep.c2_slack = a.power_w * a.alpha_far * gain_f - c2_rhs;
  rep.c2_ok = rep.c2_slack >= -kConstraintTol * std::max(1.0, std::abs(c2_rhs));

  const double tol = kConstraintTol;
  rep.c3_ok = a.power_w >= -tol && a.power_w <= power_budget_w * (1.0 + tol) + tol;
  rep.c4_ok = a.alpha_near + a.alpha_far <= 1.0 + tol;
  rep.c5_ok = a.beta >= -tol && a.beta <= 1.0 + tol;
  return rep;
}

double dinkelbach_value(double rate_sum, double power_total_w, double theta) {
  return rate_sum - theta * power_total_w;
}

}  // namespace bsnoma
