#include "bsnoma/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bsnoma {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct LineCoeffs {
  // Per-cell constants of the alpha_n stationarity condition on the
  // alpha_f = 1 - alpha_n line:
  //   N/(ln2 (A a + B)) - gamma_f(a) C/(ln2 E) - delta_hat = 0,
  // gamma_f(a) = C(1-a)/(C a + D).
  double N, A, B, C, D, E;
};

LineCoeffs line_coeffs(const CellChannels& ch, double beta, double power_w, double delta,
                       double in_w, double if_w, double noise_w) {
  LineCoeffs c{};
  const double gn = effective_gain_near(ch, beta);
  const double gf = effective_gain_far(ch, beta);
  c.N = power_w * gn;
  c.A = power_w * (gn - delta * ch.g_near_sq);
  c.B = power_w * delta * ch.g_near_sq + in_w + noise_w;
  c.C = power_w * gf;
  c.D = if_w + noise_w;
  c.E = c.C + c.D;
  return c;
}

double delta_hat_value(const CellChannels& ch, double beta, double power_w,
                       double qos_rate_min, const Multipliers& m) {
  const double gap = std::pow(2.0, qos_rate_min) - 1.0;
  return m.theta * power_w - m.mu_near * effective_gain_near(ch, beta) +
         m.mu_far * gap * effective_gain_far(ch, beta) + m.eta;
}

// C1 as a lower bound and C2 as an upper bound on alpha_n along
// alpha_f = 1 - alpha_n; both constraints are linear there.
struct QosInterval {
  double lo = 0;
  double hi = 0;
};

QosInterval qos_interval(const CellChannels& ch, double beta, double power_w, double delta,
                         double in_w, double if_w, double noise_w, double qos_rate_min) {
  const double gap = std::pow(2.0, qos_rate_min) - 1.0;
  const double gn = effective_gain_near(ch, beta);
  const double gf = effective_gain_far(ch, beta);
  QosInterval iv;
  iv.lo = gap * (ch.g_near_sq * power_w * delta + in_w + noise_w) /
          (power_w * (gn + gap * ch.g_near_sq * delta));
  iv.hi = (power_w * gf - gap * (if_w + noise_w)) /
          (power_w * gf * std::pow(2.0, qos_rate_min));
  return iv;
}

}  // namespace

double CellInstance::rate_sum(double alpha_near, double beta) const {
  Allocation a{alpha_near, 1.0 - alpha_near, beta, power_w};
  return rate(sinr_near(ch, a, delta, interference_near_w, noise_w)) +
         rate(sinr_far(ch, a, interference_far_w, noise_w));
}

double CellInstance::power_total(double) const { return power_w + circuit_w; }

FeasibilityReport CellInstance::feasibility(double alpha_near, double beta) const {
  Allocation a{alpha_near, 1.0 - alpha_near, beta, power_w};
  return check_constraints(ch, a, delta, interference_near_w, interference_far_w, noise_w,
                           qos_rate_min, power_w);
}

std::optional<double> reflection_closed_form(const CellChannels& ch, double /*alpha_near*/,
                                             double /*power_w*/, double qos_rate_min) {
  // The power and alpha_n factors cancel between numerator and denominator,
  // so the coefficient only depends on the gains and the QoS gap.
  const double path = ch.g_tag_sq * ch.h_near_sq;
  if (path <= 0.0) return std::nullopt;
  const double gap = std::pow(2.0, qos_rate_min) - 1.0;
  const double raw = gap * ch.g_near_sq / path;
  return std::clamp(raw, 0.0, 1.0);
}

StationarityTerms stationarity_terms(const CellChannels& ch, double beta, double power_w,
                                     double delta, double interference_near_w,
                                     double interference_far_w, double noise_w,
                                     double qos_rate_min, const Multipliers& m) {
  const LineCoeffs c = line_coeffs(ch, beta, power_w, delta, interference_near_w,
                                   interference_far_w, noise_w);
  StationarityTerms t;
  t.lambda_hat = c.A;
  t.omega_hat = 0.0;  // far effective gain minus itself
  t.psi_near = c.B;
  t.psi_far = c.E;
  t.delta_hat = delta_hat_value(ch, beta, power_w, qos_rate_min, m);
  return t;
}

QuadCoeffs quadratic_coefficients(const CellChannels& ch, double beta, double power_w,
                                  double delta, double interference_near_w,
                                  double interference_far_w, double noise_w,
                                  double qos_rate_min, const Multipliers& m) {
  const LineCoeffs c = line_coeffs(ch, beta, power_w, delta, interference_near_w,
                                   interference_far_w, noise_w);
  const double dh = delta_hat_value(ch, beta, power_w, qos_rate_min, m);
  // Clear denominators of the stationarity condition with gamma_f expanded:
  //   N E (C a + D) - C^2 (1-a)(A a + B) - ln2 dh E (A a + B)(C a + D) = 0.
  QuadCoeffs q;
  q.x = c.C * c.C * c.A - kLn2 * dh * c.E * c.A * c.C;
  q.y = c.N * c.E * c.C + c.C * c.C * (c.B - c.A) - kLn2 * dh * c.E * (c.A * c.D + c.B * c.C);
  q.z = c.N * c.E * c.D - c.C * c.C * c.B - kLn2 * dh * c.E * c.B * c.D;
  return q;
}

QuadCoeffs quadratic_coefficients_frozen(const StationarityTerms& t, double gain_near_eff,
                                         double gain_far_eff, double gamma_far) {
  QuadCoeffs q;
  q.x = -kLn2 * t.delta_hat * t.lambda_hat * t.omega_hat;
  q.y = gain_near_eff * t.omega_hat - gamma_far * gain_far_eff * t.lambda_hat -
        kLn2 * t.delta_hat * (t.lambda_hat * t.psi_far + t.omega_hat * t.psi_near);
  q.z = gain_near_eff * t.psi_far - gamma_far * gain_far_eff * t.psi_near -
        kLn2 * t.delta_hat * t.psi_near * t.psi_far;
  return q;
}

namespace {

struct Candidate {
  double alpha;
  bool interior_root;
};

void add_root(std::vector<Candidate>& cands, double root) {
  if (!std::isfinite(root)) return;
  const double clipped = std::clamp(std::max(0.0, root), 0.0, 0.5);
  cands.push_back({clipped, clipped == root && root > 0.0 && root < 0.5});
}

}  // namespace

PowerSplit power_split_closed_form(const QuadCoeffs& q, RootBranchPolicy policy,
                                   const CellInstance& inst, double beta, double theta) {
  std::vector<Candidate> cands;
  bool have_root = false;
  double root_plus = 0, root_minus = 0;
  if (q.x != 0.0) {
    const double disc = q.y * q.y - 4.0 * q.x * q.z;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      root_plus = (-q.y + sq) / (2.0 * q.x);
      root_minus = (-q.y - sq) / (2.0 * q.x);
      have_root = true;
    }
  } else if (q.y != 0.0) {
    root_plus = root_minus = -q.z / q.y;
    have_root = true;
  } else {
    throw std::invalid_argument("power_split_closed_form: x and y both zero");
  }

  if (policy == RootBranchPolicy::plus && have_root) {
    const double a = std::clamp(std::max(0.0, root_plus), 0.0, 0.5);
    return {a, 1.0 - a, a == root_plus && a > 0 && a < 0.5, inst.feasibility(a, beta).all()};
  }
  if (policy == RootBranchPolicy::minus && have_root) {
    const double a = std::clamp(std::max(0.0, root_minus), 0.0, 0.5);
    return {a, 1.0 - a, a == root_minus && a > 0 && a < 0.5, inst.feasibility(a, beta).all()};
  }

  if (have_root) {
    add_root(cands, root_plus);
    add_root(cands, root_minus);
  }
  cands.push_back({0.0, false});
  cands.push_back({0.5, false});
  const QosInterval iv = qos_interval(inst.ch, beta, inst.power_w, inst.delta,
                                      inst.interference_near_w, inst.interference_far_w,
                                      inst.noise_w, inst.qos_rate_min);
  if (std::isfinite(iv.lo)) cands.push_back({std::clamp(iv.lo, 0.0, 0.5), false});
  if (std::isfinite(iv.hi)) cands.push_back({std::clamp(iv.hi, 0.0, 0.5), false});

  PowerSplit best;
  double best_f = -std::numeric_limits<double>::infinity();
  double best_any_f = -std::numeric_limits<double>::infinity();
  PowerSplit best_any;
  for (const Candidate& c : cands) {
    const double f = dinkelbach_value(inst.rate_sum(c.alpha, beta),
                                      inst.power_total(c.alpha), theta);
    const bool ok = inst.feasibility(c.alpha, beta).all();
    if (ok && f > best_f) {
      best_f = f;
      best = {c.alpha, 1.0 - c.alpha, c.interior_root, true};
    }
    if (f > best_any_f) {
      best_any_f = f;
      best_any = {c.alpha, 1.0 - c.alpha, c.interior_root, false};
    }
  }
  return best.feasible ? best : best_any;
}

Multipliers update_multipliers(const Multipliers& m, const FeasibilityReport& rep,
                               double budget_residual_w, double beta, double alpha_sum,
                               double step) {
  if (step <= 0) throw std::invalid_argument("update_multipliers: step must be > 0");
  Multipliers out = m;
  out.mu_near = std::max(0.0, m.mu_near - step * rep.c1_slack);
  out.mu_far = std::max(0.0, m.mu_far - step * rep.c2_slack);
  out.lambda = std::max(0.0, m.lambda - step * budget_residual_w);
  out.tau = std::max(0.0, m.tau - step * (1.0 - beta));
  out.eta = std::max(0.0, m.eta - step * (1.0 - alpha_sum));
  return out;
}

namespace {

// Feasible-best reflection coefficient among the closed-form value and the
// C5 box corners. The sum rate is increasing in beta (Lemma-1 battery), so
// beta = 1 wins whenever it is feasible; the closed-form value matters when
// the QoS corner is the only feasible choice.
double pick_beta(const CellInstance& inst, double alpha_near, double theta) {
  double cands[3] = {1.0, 0.0, 0.0};
  int n = 2;
  if (auto b = reflection_closed_form(inst.ch, alpha_near, inst.power_w, inst.qos_rate_min))
    cands[n++] = *b;
  double best = 1.0;
  double best_f = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = 0; i < n; ++i) {
    if (!inst.feasibility(alpha_near, cands[i]).all()) continue;
    const double f = dinkelbach_value(inst.rate_sum(alpha_near, cands[i]),
                                      inst.power_total(alpha_near), theta);
    if (f > best_f) {
      best_f = f;
      best = cands[i];
      found = true;
    }
  }
  // No candidate feasible at this alpha iterate: beta = 1 maximizes both
  // QoS slacks for rate floors up to 1 bit/s/Hz, so it is the recovery pick.
  return found ? best : 1.0;
}

bool interval_feasible(const CellInstance& inst, double beta) {
  const QosInterval iv =
      qos_interval(inst.ch, beta, inst.power_w, inst.delta, inst.interference_near_w,
                   inst.interference_far_w, inst.noise_w, inst.qos_rate_min);
  const double lo = std::max(0.0, iv.lo);
  const double hi = std::min(0.5, iv.hi);
  if (!(lo <= hi)) return false;
  return inst.feasibility(std::clamp(lo, 0.0, 0.5), beta).all();
}

}  // namespace

CellSolve solve_cell(const CellInstance& inst, const SolverSettings& settings,
                     std::optional<double> forced_beta, double theta0) {
  settings.validate();
  CellSolve out;
  const double probe_beta = forced_beta.value_or(1.0);

  out.probe_report = inst.feasibility(0.25, probe_beta);
  if (!out.probe_report.all() && !interval_feasible(inst, probe_beta)) {
    return out;  // infeasible: no (alpha, beta) satisfies C1..C5
  }

  Multipliers mults;
  mults.theta = theta0;
  double alpha = 0.25;
  double beta = probe_beta;

  for (int it = 1; it <= settings.max_outer_iters; ++it) {
    if (!forced_beta) beta = pick_beta(inst, alpha, mults.theta);

    const QuadCoeffs q = quadratic_coefficients(
        inst.ch, beta, inst.power_w, inst.delta, inst.interference_near_w,
        inst.interference_far_w, inst.noise_w, inst.qos_rate_min, mults);
    const PowerSplit split =
        power_split_closed_form(q, settings.root_branch, inst, beta, mults.theta);
    if (!split.feasible) {
      out.probe_report = inst.feasibility(split.alpha_near, beta);
      out.iterations = it;
      return out;  // no feasible power split at this reflection coefficient
    }
    alpha = split.alpha_near;

    const FeasibilityReport rep = inst.feasibility(alpha, beta);
    const double step = settings.subgradient_step0 *
                        std::pow(settings.step_decay, it - 1) / std::sqrt(double(it));
    const double theta = mults.theta;
    mults = update_multipliers(mults, rep, /*budget residual*/ 0.0, beta,
                               /*alpha_sum*/ 1.0, step);
    mults.theta = theta;

    const double rsum = inst.rate_sum(alpha, beta);
    const double ptot = inst.power_total(alpha);
    const double f = dinkelbach_value(rsum, ptot, mults.theta);

    CellTraceEntry entry;
    entry.theta = mults.theta;
    entry.dinkelbach_f = f;
    entry.ee = rsum / ptot;
    entry.alloc = Allocation{alpha, 1.0 - alpha, beta, inst.power_w};
    entry.report = rep;
    out.trace.push_back(entry);
    out.iterations = it;

    if (std::abs(f) < settings.dinkelbach_tol) {
      out.converged = true;
      break;
    }
    mults.theta = rsum / ptot;
  }

  out.feasible = true;
  out.alloc = Allocation{alpha, 1.0 - alpha, beta, inst.power_w};
  out.mults = mults;
  out.breakdown = cell_ee(inst.ch, out.alloc, inst.delta, inst.interference_near_w,
                          inst.interference_far_w, inst.noise_w, inst.circuit_w);
  return out;
}

NetworkSolve solve_network(const std::vector<CellChannels>& channels,
                           const NetworkConfig& config, const SolverSettings& settings,
                           std::optional<double> forced_beta) {
  config.validate();
  settings.validate();
  const std::size_t S = channels.size();
  if (S == 0) throw std::invalid_argument("solve_network: empty network");

  const double p = dbm_to_watts(config.power_budget_dbm);
  const std::vector<double> powers(S, p);

  NetworkSolve out;
  out.cells.resize(S);
  std::vector<double> theta0(S, 0.0);

  double prev_total = std::numeric_limits<double>::quiet_NaN();
  for (int sweep = 1; sweep <= settings.max_inner_iters; ++sweep) {
    int sweep_iters = 1;
    double total = 0.0;
    int feasible = 0;
    for (std::size_t s = 0; s < S; ++s) {
      CellInstance inst;
      inst.ch = channels[s];
      inst.power_w = p;
      inst.delta = config.sic_imperfection;
      inst.interference_near_w = interference(s, Vehicle::near, channels, powers);
      inst.interference_far_w = interference(s, Vehicle::far, channels, powers);
      inst.noise_w = config.noise_variance_w;
      inst.qos_rate_min = config.qos_rate_min;
      inst.circuit_w = config.circuit_power_w;

      out.cells[s] = solve_cell(inst, settings, forced_beta, theta0[s]);
      if (out.cells[s].feasible) {
        theta0[s] = out.cells[s].mults.theta;
        total += out.cells[s].breakdown.ee;
        ++feasible;
        sweep_iters = std::max(sweep_iters, out.cells[s].iterations);
      }
    }
    out.iterations += sweep_iters;
    out.sweeps = sweep;
    out.feasible_cells = feasible;
    out.total_ee = total;
    out.trace.push_back({sweep, out.iterations, total});

    if (sweep >= 2 &&
        std::abs(total - prev_total) <= settings.sweep_rel_tol * std::max(1.0, std::abs(total))) {
      out.converged = true;
      break;
    }
    prev_total = total;
  }
  return out;
}

std::string to_string(RootBranchPolicy p) {
  switch (p) {
    case RootBranchPolicy::feasible_best: return "feasible-best";
    case RootBranchPolicy::plus: return "plus";
    case RootBranchPolicy::minus: return "minus";
  }
  return "feasible-best";
}

RootBranchPolicy root_branch_from_string(const std::string& s) {
  if (s == "feasible-best") return RootBranchPolicy::feasible_best;
  if (s == "plus") return RootBranchPolicy::plus;
  if (s == "minus") return RootBranchPolicy::minus;
  throw std::invalid_argument("unknown root branch policy: " + s);
}

}  // namespace bsnoma
