#pragma once

#include <string>
#include <vector>

#include "crabnet/phy.hpp"

namespace crabnet {

/// Beams simultaneously emitted by one gNB. Null entries are allowed and ignored.
struct BeamConfig {
  std::vector<Beam> beams;
  int owner = -1;

  static BeamConfig silent(int owner_id = -1) { return BeamConfig{{}, owner_id}; }

  std::size_t active_count() const;
  bool is_silent() const { return active_count() == 0; }
  /// Non-null beams ordered by (direction, hpbw).
  std::vector<Beam> canonical() const;
  /// Human-readable, e.g. "90/10+180/5"; "-" for the silent configuration.
  std::string label() const;

  /// Same emitted beams, regardless of order, null padding or owner.
  friend bool operator==(const BeamConfig& a, const BeamConfig& b) { return a.canonical() == b.canonical(); }
};

/// One BeamConfig per site, indexed like Scenario::sites().
struct NetworkConfig {
  std::vector<BeamConfig> configs;

  static NetworkConfig silent(std::size_t sites) { return NetworkConfig{std::vector<BeamConfig>(sites)}; }
};

}  // namespace crabnet
