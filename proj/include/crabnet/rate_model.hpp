#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crabnet/beam_config.hpp"
#include "crabnet/scenario.hpp"

namespace crabnet {

/// Read-only view of the link state of one decision period: the occupied zones,
/// which of them each beam covers, and averaged channel gains.
class LinkModel {
 public:
  virtual ~LinkModel() = default;
  virtual const Scenario& scenario() const = 0;
  /// Occupied zones Z_n, sorted.
  virtual const std::vector<ZoneId>& zones() const = 0;
  /// Zones of zones() covered by the beam of the given site, sorted.
  virtual const std::vector<ZoneId>& covered(std::size_t site, const Beam& beam) const = 0;
  /// Averaged |h~|^2 of `beam` at `zone` with the zone receiver facing `rx_site`.
  virtual double mean_gain(std::size_t site, const Beam& beam, ZoneId zone, std::size_t rx_site) const = 0;
};

/// Equal split of P_g (dBm) over the non-null beams, in watts, one entry per non-null beam.
std::vector<double> power_split(const BeamConfig& cfg, double p_dbm);

struct ActiveBeam {
  std::size_t site = 0;
  std::size_t beam = 0;
  Beam geometry;
  double power_w = 0.0;
};

/// All non-null beams of a network configuration with their power shares.
std::vector<ActiveBeam> active_beams(const NetworkConfig& cfg, const Scenario& scenario);

/// Strongest covering beam by P * mean_gain (receiver facing the candidate's site).
/// Ties go to the lower site index, then the lower beam index.
std::optional<std::size_t> strongest_beam(std::span<const ActiveBeam> covering, ZoneId zone,
                                          const LinkModel& links);

struct RateOptions {
  bool interference = true;
};

/// Rate of one zone served by `covering[serving]`, all other covering beams interfering,
/// summed over all N_b resource blocks.
double zone_rate(std::span<const ActiveBeam> covering, std::size_t serving, ZoneId zone,
                 const LinkModel& links, const RateOptions& opts = {});

/// T(B): sum over occupied zones and all RBs of the per-RB rate, each zone served by its
/// strongest covering beam.
double network_rate(const NetworkConfig& cfg, const LinkModel& links, const RateOptions& opts = {});

/// Share of T(B) delivered by one site's beams.
double site_rate(std::size_t site, const NetworkConfig& cfg, const LinkModel& links,
                 const RateOptions& opts = {});

}  // namespace crabnet
