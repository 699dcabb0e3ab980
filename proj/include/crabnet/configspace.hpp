#pragma once

#include <vector>

#include "crabnet/beam_config.hpp"
#include "crabnet/rate_model.hpp"

namespace crabnet {

/// Antenna budget (sum of N_i^2 <= N_t^2), at most B entries and pairwise non-overlap.
bool is_feasible(const BeamConfig& cfg, const GnbSite& site);

/// Interference-free rate of `cfg` at `site` with every other gNB silent.
double standalone_rate(std::size_t site, const BeamConfig& cfg, const LinkModel& links);

/// Demand-driven candidate set for one site, best first by standalone rate.
///
/// Beam directions are the bearings of occupied zones within range, quantized to
/// `limits.direction_quantum_deg`; widths come from `limits.widths_deg`. Multi-beam
/// configurations grow greedily from the best single beams, adding whichever
/// feasible beam raises the standalone rate most. The list is truncated to
/// `limits.max_configs`, with the silent configuration appended last when there is room
/// (it is the only entry when nothing is in range).
std::vector<BeamConfig> enumerate_candidates(std::size_t site, const LinkModel& links,
                                             const CandidateLimits& limits);

}  // namespace crabnet
