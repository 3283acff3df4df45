#pragma once

#include "bsnoma/solver.hpp"

namespace bsnoma {

// Exhaustive grid over the per-cell decision space. Step counts are interval
// counts: alpha_steps intervals over [0, 0.5] give alpha_steps + 1 points
// including both endpoints, so doubling the count yields a nested grid.
struct GridSpec {
  int alpha_steps = 1000;
  int beta_steps = 1000;

  void validate() const {
    if (alpha_steps < 2 || beta_steps < 2)
      throw std::invalid_argument("grid steps must be >= 2");
  }
};

struct GridResult {
  bool feasible = false;
  double alpha_near = 0;
  double beta = 0;
  double ee = 0;
};

// Evaluates cell_ee at every feasible grid point (alpha_f = 1 - alpha_n) and
// returns the maximizer. Independent of the closed-form solve path.
GridResult grid_search_cell(const CellInstance& inst, const GridSpec& grid);

struct CertifyResult {
  bool pass = false;
  double margin = 0;  // solution_ee - oracle_ee
};

// Pass iff solution_ee >= oracle_ee - rel_tol * max(1, oracle_ee). The
// closed form may slightly exceed the grid optimum since the grid is
// discrete.
CertifyResult certify(double solution_ee, double oracle_ee, double rel_tol);

}  // namespace bsnoma
