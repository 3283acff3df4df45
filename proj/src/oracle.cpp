#include "bsnoma/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace bsnoma {

GridResult grid_search_cell(const CellInstance& inst, const GridSpec& grid) {
  grid.validate();
  GridResult best;
  const double denom_noise_far = inst.interference_far_w + inst.noise_w;
  const double gap = std::pow(2.0, inst.qos_rate_min) - 1.0;

  for (int j = 0; j <= grid.beta_steps; ++j) {
    const double beta = double(j) / grid.beta_steps;
    const double gain_n = effective_gain_near(inst.ch, beta);
    const double gain_f = effective_gain_far(inst.ch, beta);
    for (int i = 0; i <= grid.alpha_steps; ++i) {
      const double an = 0.5 * double(i) / grid.alpha_steps;
      const double af = 1.0 - an;
      // C1/C2 in their linearized forms; same tolerance as check_constraints.
      const double c1_rhs = gap * (inst.ch.g_near_sq * inst.power_w * af * inst.delta +
                                   inst.interference_near_w + inst.noise_w);
      const double c1_lhs = inst.power_w * an * gain_n;
      if (c1_lhs - c1_rhs < -kConstraintTol * std::max(1.0, std::abs(c1_rhs))) continue;
      const double c2_rhs = gap * (inst.power_w * an * gain_f + denom_noise_far);
      const double c2_lhs = inst.power_w * af * gain_f;
      if (c2_lhs - c2_rhs < -kConstraintTol * std::max(1.0, std::abs(c2_rhs))) continue;

      const double sn = c1_lhs / (inst.power_w * af * inst.ch.g_near_sq * inst.delta +
                                  inst.interference_near_w + inst.noise_w);
      const double sf = inst.power_w * af * gain_f /
                        (inst.power_w * an * gain_f + denom_noise_far);
      const double ee = (std::log2(1.0 + sn) + std::log2(1.0 + sf)) /
                        (inst.power_w + inst.circuit_w);
      if (!best.feasible || ee > best.ee) {
        best.feasible = true;
        best.ee = ee;
        best.alpha_near = an;
        best.beta = beta;
      }
    }
  }
  return best;
}

CertifyResult certify(double solution_ee, double oracle_ee, double rel_tol) {
  CertifyResult r;
  r.margin = solution_ee - oracle_ee;
  r.pass = solution_ee >= oracle_ee - rel_tol * std::max(1.0, oracle_ee);
  return r;
}

}  // namespace bsnoma
