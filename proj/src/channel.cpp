#include "bsnoma/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "bsnoma/rng.hpp"

namespace bsnoma {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

namespace {

// Link-class tags for the per-draw counters. Cross-cell links are keyed by
// (cell, link, neighbor id) so a cell's draws are identical in any network
// that contains both cells.
enum Link : std::uint64_t {
  kDirectA = 0,
  kDirectB = 1,
  kRsuTag = 2,
  kTagNear = 3,
  kTagFar = 4,
  kCrossNear = 5,
  kCrossFar = 6,
};

double draw(std::uint64_t seed, std::uint64_t cell, std::uint64_t link,
            std::uint64_t idx, double mean) {
  return rng::exponential(rng::hash(seed, cell, link, idx), mean);
}

}  // namespace

std::vector<CellChannels> sample_network(const NetworkConfig& config) {
  config.validate();
  const auto S = static_cast<std::size_t>(config.num_cells);
  std::vector<CellChannels> cells(S);
  for (std::size_t s = 0; s < S; ++s) {
    CellChannels& c = cells[s];
    double a = draw(config.rng_seed, s, kDirectA, 0, config.direct_gain_mean);
    double b = draw(config.rng_seed, s, kDirectB, 0, config.direct_gain_mean);
    if (a < b) std::swap(a, b);  // near vehicle gets the stronger channel
    c.g_near_sq = a;
    c.g_far_sq = b;
    c.g_tag_sq = draw(config.rng_seed, s, kRsuTag, 0, config.backscatter_gain_mean);
    c.h_near_sq = draw(config.rng_seed, s, kTagNear, 0, config.tag_vehicle_gain_mean);
    c.h_far_sq = draw(config.rng_seed, s, kTagFar, 0, config.tag_vehicle_gain_mean);
    c.cross_near.reserve(S - 1);
    c.cross_far.reserve(S - 1);
    for (std::size_t sp = 0; sp < S; ++sp) {
      if (sp == s) continue;
      c.cross_near.push_back(draw(config.rng_seed, s, kCrossNear, sp, config.cross_gain_mean));
      c.cross_far.push_back(draw(config.rng_seed, s, kCrossFar, sp, config.cross_gain_mean));
    }
  }
  return cells;
}

double interference(std::size_t cell, Vehicle vehicle,
                    const std::vector<CellChannels>& channels,
                    const std::vector<double>& powers_w) {
  if (powers_w.size() != channels.size())
    throw std::invalid_argument("interference: powers length must equal cell count");
  if (cell >= channels.size())
    throw std::invalid_argument("interference: cell index out of range");
  const auto& gains = vehicle == Vehicle::near ? channels[cell].cross_near
                                               : channels[cell].cross_far;
  if (gains.size() + 1 != channels.size())
    throw std::invalid_argument("interference: cross gain list length mismatch");
  double sum = 0;
  std::size_t g = 0;
  for (std::size_t sp = 0; sp < channels.size(); ++sp) {
    if (sp == cell) continue;
    sum += gains[g++] * powers_w[sp];
  }
  return sum;
}

double sinr_near(const CellChannels& ch, const Allocation& a, double delta,
                 double interference_w, double noise_w) {
  const double num = a.power_w * a.alpha_near * effective_gain_near(ch, a.beta);
  const double den =
      a.power_w * a.alpha_far * ch.g_near_sq * delta + interference_w + noise_w;
  return num / den;
}

double sinr_far(const CellChannels& ch, const Allocation& a,
                double interference_w, double noise_w) {
  const double gain = effective_gain_far(ch, a.beta);
  const double num = a.power_w * a.alpha_far * gain;
  const double den = a.power_w * a.alpha_near * gain + interference_w + noise_w;
  return num / den;
}

double rate(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace bsnoma
