#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crabnet/channel.hpp"
#include "crabnet/rate_model.hpp"

namespace crabnet {

/// Link state of one decision period. Shadowing is drawn once per (site, zone, period);
/// mean gains average |h~|^2 over `channel.averaging_window` independent realizations.
/// Everything is computed lazily from streams derived from (seed, period, site, zone),
/// so results do not depend on query order. Not safe for concurrent use.
class LinkStats final : public LinkModel {
 public:
  LinkStats(const Scenario& scenario, std::vector<ZoneId> occupied, std::uint64_t seed, std::uint64_t period);

  const Scenario& scenario() const override { return *scenario_; }
  const std::vector<ZoneId>& zones() const override { return occupied_; }
  const std::vector<ZoneId>& covered(std::size_t site, const Beam& beam) const override;
  double mean_gain(std::size_t site, const Beam& beam, ZoneId zone, std::size_t rx_site) const override;

  const LargeScale& large_scale(std::size_t site, ZoneId zone) const;
  std::uint64_t seed() const { return seed_; }
  std::uint64_t period() const { return period_; }

 private:
  struct History {
    std::vector<std::uint32_t> start;  // draw d uses clusters [start[d], start[d+1])
    std::vector<double> departure;
    std::vector<double> arrival;
    std::vector<Complex> gain;
    std::vector<double> cos_dep;  // of the absolute departure azimuth
    std::vector<double> sin_dep;
  };
  struct Key {
    std::uint64_t a;
    std::uint64_t b;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return std::hash<std::uint64_t>{}(k.a * 0x9E3779B97F4A7C15ULL ^ k.b); }
  };

  const History& history(std::size_t site, ZoneId zone) const;
  /// gain * receiver array factor per history cluster, zero behind the receiver.
  const std::vector<Complex>& rx_weighted(std::size_t site, ZoneId zone, std::size_t rx_site) const;

  const Scenario* scenario_;
  std::vector<ZoneId> occupied_;
  std::uint64_t seed_;
  std::uint64_t period_;
  mutable std::map<std::pair<std::size_t, ZoneId>, LargeScale> large_;
  mutable std::map<std::pair<std::size_t, ZoneId>, History> history_;
  mutable std::unordered_map<Key, double, KeyHash> gains_;
  mutable std::map<std::tuple<std::size_t, ZoneId, std::size_t>, std::vector<Complex>> rx_weighted_;
  mutable std::unordered_map<Key, std::vector<ZoneId>, KeyHash> covered_;
};

/// Stable hashable identity of a beam's geometry (direction and width to 1e-6 deg).
std::uint64_t beam_key(const Beam& beam);

}  // namespace crabnet
