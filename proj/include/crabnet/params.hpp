#pragma once

#include <array>
#include <vector>

namespace crabnet {

/// Radio resource grid and noise. Defaults are the FR2 profile: 52 GHz carrier,
/// 400 MHz channel, numerology 3 (120 kHz SCS), 264 RBs of 12 subcarriers.
struct RadioParams {
  double carrier_ghz = 52.0;
  double total_bandwidth_hz = 400e6;
  double rb_bandwidth_hz = 12 * 120e3;
  int rb_count = 264;
  int slots_per_frame = 80;
  double noise_dbm_per_hz = -174.0;
  int rx_side = 8;

  double tau() const { return 1.0 / slots_per_frame; }
  /// N0 * W in watts.
  double noise_power_w() const;
  void validate() const;

  static RadioParams nr_fr2_default() { return {}; }
};

/// Statistical cluster channel. L = max(1, floor + Poisson(mean)); gains CN(0, PL*SF);
/// angles = geometric bearing + N(0, spread).
struct ChannelModelParams {
  double los_cluster_mean = 2.0;
  double nlos_cluster_mean = 3.0;
  int cluster_floor = 1;
  double los_shadowing_db = 4.0;
  double nlos_shadowing_db = 8.2;
  double angle_spread_deg = 10.0;
  /// Coverage and interference range cap (also the distance-criterion d_thr).
  double range_m = 400.0;
  /// Channel realizations averaged per decision period.
  int averaging_window = 1000;

  void validate() const;
};

struct CandidateLimits {
  int max_configs = 64;
  std::vector<double> widths_deg{5.0, 10.0, 15.0};
  double direction_quantum_deg = 1.0;

  void validate() const;
};

/// 4-bit CQI spectral efficiencies (bits/s/Hz) for CQI 1..15.
struct CqiTable {
  std::array<double, 15> se{0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
                            2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};

  void validate() const;
};

}  // namespace crabnet
