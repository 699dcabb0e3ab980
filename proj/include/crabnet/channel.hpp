#pragma once

#include <vector>

#include "crabnet/phy.hpp"
#include "crabnet/rng.hpp"
#include "crabnet/scenario.hpp"

namespace crabnet {

/// UMi street-canyon pathloss in dB (d in meters, clamped to >= 1 m).
double pathloss_db(double distance_m, double carrier_ghz, bool los);

struct LargeScale {
  bool los = true;
  double distance_m = 0.0;
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;

  /// Linear per-cluster gain variance 10^(-(PL + SF) / 10).
  double mean_power() const;
};

LargeScale draw_large_scale(const Scenario& scenario, const GnbSite& site, Vec2 zone_center, Rng& rng);

/// Cluster geometry of one gNB-zone link plus per-RB cluster gains.
/// Offsets are relative to the geometric bearings (site->zone for departure,
/// zone->site for arrival), so one realization serves every beam of the site.
struct LinkRealization {
  LargeScale large;
  std::vector<double> departure_offset_deg;
  std::vector<double> arrival_offset_deg;
  std::vector<Complex> gains;  // [rb * clusters + l]
  int rb_count = 0;

  int clusters() const { return static_cast<int>(departure_offset_deg.size()); }
  Complex gain(int rb, int l) const { return gains[static_cast<std::size_t>(rb) * clusters() + l]; }
};

LinkRealization draw_link(const LargeScale& large, int rb_count, const ChannelModelParams& params, Rng& rng);

/// One RB of a link seen by a particular beam: angles relative to the transmitting
/// panel normal and to the receiver array normal.
struct ChannelDraw {
  int clusters = 1;
  std::vector<Complex> gains;
  std::vector<double> departure_deg;
  std::vector<double> arrival_deg;
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
};

/// Receiver array normal for a zone pointing its beam at `target`, rounded to 1 deg.
double rx_normal(Vec2 zone_center, Vec2 target);

ChannelDraw channel_view(const LinkRealization& link, const GnbSite& site, Vec2 zone_center,
                         const Beam& beam, int rb, double rx_normal_deg);

/// Draws shadowing, clusters and the RB-q gains from `rng`; the receiver faces the site.
ChannelDraw draw_channel(const Scenario& scenario, const GnbSite& site, const Zone& zone,
                         const Beam& beam, int rb, Rng& rng);

/// H = sqrt(1/L) sum_l h_l s(N_r, theta_l) s(N, phi_l)^H, dimension N_r^2 x N^2.
ComplexMatrix channel_matrix(const ChannelDraw& draw, int n, int n_r);

/// w^H H v, evaluated per cluster as (w^H u_l)(mu_l^H v). Throws DomainError on size mismatch.
Complex effective_channel(const ComplexVector& w, const ChannelDraw& draw, const ComplexVector& v,
                          int n, int n_r);

/// Closed-form w^H H v for a transmitter steered `tx_steer_deg` off its panel normal
/// and a receiver steered `rx_steer_deg` off its normal. Clusters arriving from or
/// leaving through the back half-plane of either array contribute nothing.
Complex beam_response(const ChannelDraw& draw, int n, double tx_steer_deg, int n_r, double rx_steer_deg);

}  // namespace crabnet
