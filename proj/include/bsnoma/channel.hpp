#pragma once

#include <cstddef>
#include <vector>

#include "bsnoma/types.hpp"

namespace bsnoma {

enum class Vehicle { near, far };

// 10^((dbm - 30)/10)
double dbm_to_watts(double dbm);

// Draws a Rayleigh-fading realization for every cell: all squared gains are
// exponential with the configured per-link means. Deterministic in
// config.rng_seed. Direct vehicle gains are sorted so the near label gets
// the stronger channel.
std::vector<CellChannels> sample_network(const NetworkConfig& config);

// Co-channel interference at the given vehicle of `cell`: sum over the other
// cells of cross gain times that cell's transmit power. `powers_w` must have
// one entry per cell.
double interference(std::size_t cell, Vehicle vehicle,
                    const std::vector<CellChannels>& channels,
                    const std::vector<double>& powers_w);

// SINR of the near (SIC) vehicle. `delta` is the residual fraction of the
// far-vehicle signal left after imperfect cancellation.
double sinr_near(const CellChannels& ch, const Allocation& a, double delta,
                 double interference_w, double noise_w);

// SINR of the far vehicle; the near-vehicle signal is treated as
// interference (no SIC at the far vehicle).
double sinr_far(const CellChannels& ch, const Allocation& a,
                double interference_w, double noise_w);

// Shannon spectral efficiency log2(1 + sinr).
double rate(double sinr);

// Effective gains with the backscatter path folded in.
inline double effective_gain_near(const CellChannels& ch, double beta) {
  return ch.g_near_sq + beta * ch.g_tag_sq * ch.h_near_sq;
}
inline double effective_gain_far(const CellChannels& ch, double beta) {
  return ch.g_far_sq + beta * ch.g_tag_sq * ch.h_far_sq;
}

}  // namespace bsnoma
