#include "crabnet/params.hpp"

#include <cmath>

#include "crabnet/error.hpp"

namespace crabnet {

double RadioParams::noise_power_w() const {
  return std::pow(10.0, (noise_dbm_per_hz - 30.0) / 10.0) * rb_bandwidth_hz;
}

void RadioParams::validate() const {
  if (carrier_ghz <= 0.0) throw ValidationError("radio: carrier_ghz must be positive");
  if (rb_count < 1) throw ValidationError("radio: rb_count must be >= 1");
  if (rb_bandwidth_hz <= 0.0) throw ValidationError("radio: rb_bandwidth_hz must be positive");
  if (rb_bandwidth_hz * rb_count > total_bandwidth_hz * (1.0 + 1e-12))
    throw ValidationError("radio: rb_bandwidth_hz * rb_count exceeds total bandwidth");
  if (slots_per_frame < 1) throw ValidationError("radio: slots_per_frame must be >= 1");
  if (rx_side < 1) throw ValidationError("radio: rx_side must be >= 1");
}

void ChannelModelParams::validate() const {
  if (los_cluster_mean < 0.0 || nlos_cluster_mean < 0.0)
    throw ValidationError("channel: cluster means must be >= 0");
  if (cluster_floor < 0) throw ValidationError("channel: cluster_floor must be >= 0");
  if (los_shadowing_db < 0.0 || nlos_shadowing_db < 0.0)
    throw ValidationError("channel: shadowing sigma must be >= 0");
  if (angle_spread_deg < 0.0) throw ValidationError("channel: angle_spread_deg must be >= 0");
  if (range_m <= 0.0) throw ValidationError("channel: range_m must be positive");
  if (averaging_window < 1) throw ValidationError("channel: averaging_window must be >= 1");
}

void CandidateLimits::validate() const {
  if (max_configs < 1) throw ValidationError("limits: max_configs must be >= 1");
  if (widths_deg.empty()) throw ValidationError("limits: widths_deg must not be empty");
  for (double w : widths_deg)
    if (!(w > 0.0)) throw ValidationError("limits: widths must be positive");
  if (!(direction_quantum_deg > 0.0))
    throw ValidationError("limits: direction_quantum_deg must be positive");
}

void CqiTable::validate() const {
  for (std::size_t i = 0; i < se.size(); ++i) {
    if (!(se[i] > 0.0)) throw ValidationError("cqi: spectral efficiencies must be positive");
    if (i > 0 && se[i] <= se[i - 1]) throw ValidationError("cqi: table must be increasing");
  }
}

}  // namespace crabnet
