#include "crabnet/channel.hpp"

#include <cmath>
#include <numbers>

#include "crabnet/error.hpp"

namespace crabnet {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

double pathloss_db(double distance_m, double carrier_ghz, bool los) {
  const double d = std::max(1.0, distance_m);
  const double slope = los ? 21.0 : 31.9;
  return 32.4 + slope * std::log10(d) + 20.0 * std::log10(carrier_ghz);
}

double LargeScale::mean_power() const { return std::pow(10.0, -(pathloss_db + shadowing_db) / 10.0); }

LargeScale draw_large_scale(const Scenario& scenario, const GnbSite& site, Vec2 zone_center, Rng& rng) {
  LargeScale ls;
  ls.los = scenario.is_los(site.position, zone_center);
  ls.distance_m = distance(site.position, zone_center);
  ls.pathloss_db = pathloss_db(ls.distance_m, scenario.radio.carrier_ghz, ls.los);
  const double sigma = ls.los ? scenario.channel.los_shadowing_db : scenario.channel.nlos_shadowing_db;
  ls.shadowing_db = sigma > 0.0 ? std::normal_distribution<double>(0.0, sigma)(rng) : 0.0;
  return ls;
}

LinkRealization draw_link(const LargeScale& large, int rb_count, const ChannelModelParams& params, Rng& rng) {
  LinkRealization link;
  link.large = large;
  link.rb_count = rb_count;
  const double lambda = large.los ? params.los_cluster_mean : params.nlos_cluster_mean;
  int clusters = params.cluster_floor;
  if (lambda > 0.0) clusters += std::poisson_distribution<int>(lambda)(rng);
  clusters = std::max(1, clusters);

  std::normal_distribution<double> angle(0.0, 1.0);
  link.departure_offset_deg.resize(clusters);
  link.arrival_offset_deg.resize(clusters);
  for (int l = 0; l < clusters; ++l) {
    link.departure_offset_deg[l] = params.angle_spread_deg * angle(rng);
    link.arrival_offset_deg[l] = params.angle_spread_deg * angle(rng);
  }
  // CN(0, sigma^2): independent real and imaginary parts of variance sigma^2 / 2.
  std::normal_distribution<double> component(0.0, std::sqrt(0.5 * large.mean_power()));
  link.gains.resize(static_cast<std::size_t>(rb_count) * clusters);
  for (Complex& g : link.gains) {
    const double re = component(rng);
    g = {re, component(rng)};
  }
  return link;
}

double rx_normal(Vec2 zone_center, Vec2 target) {
  if (zone_center == target) return 0.0;
  return wrap360(std::round(bearing(zone_center, target)));
}

ChannelDraw channel_view(const LinkRealization& link, const GnbSite& site, Vec2 zone_center,
                         const Beam& beam, int rb, double rx_normal_deg) {
  if (rb < 0 || rb >= link.rb_count) throw DomainError("channel_view: rb index out of range");
  const double to_zone = zone_center == site.position ? 0.0 : bearing(site.position, zone_center);
  const double to_site = wrap360(to_zone + 180.0);
  const double tx_normal = beam.is_null() ? site.psi_deg : panel_normal(site, beam.direction());

  ChannelDraw d;
  d.clusters = link.clusters();
  d.pathloss_db = link.large.pathloss_db;
  d.shadowing_db = link.large.shadowing_db;
  d.gains.resize(d.clusters);
  d.departure_deg.resize(d.clusters);
  d.arrival_deg.resize(d.clusters);
  for (int l = 0; l < d.clusters; ++l) {
    d.gains[l] = link.gain(rb, l);
    d.departure_deg[l] = wrap180(to_zone + link.departure_offset_deg[l] - tx_normal);
    d.arrival_deg[l] = wrap180(to_site + link.arrival_offset_deg[l] - rx_normal_deg);
  }
  return d;
}

ChannelDraw draw_channel(const Scenario& scenario, const GnbSite& site, const Zone& zone,
                         const Beam& beam, int rb, Rng& rng) {
  if (beam.is_null()) throw DomainError("draw_channel: beam must not be null");
  const LargeScale large = draw_large_scale(scenario, site, zone.center, rng);
  const LinkRealization link = draw_link(large, rb + 1, scenario.channel, rng);
  return channel_view(link, site, zone.center, beam, rb, rx_normal(zone.center, site.position));
}

ComplexMatrix channel_matrix(const ChannelDraw& draw, int n, int n_r) {
  const std::size_t tx = static_cast<std::size_t>(n) * n;
  const std::size_t rx = static_cast<std::size_t>(n_r) * n_r;
  ComplexMatrix h(rx, tx);
  const double scale = std::sqrt(1.0 / draw.clusters);
  for (int l = 0; l < draw.clusters; ++l) {
    const ComplexVector u = spatial_signature(n_r, draw.arrival_deg[l]);
    const ComplexVector mu = spatial_signature(n, draw.departure_deg[l]);
    for (std::size_t r = 0; r < rx; ++r)
      for (std::size_t c = 0; c < tx; ++c) h(r, c) += scale * draw.gains[l] * u[r] * std::conj(mu[c]);
  }
  return h;
}

Complex effective_channel(const ComplexVector& w, const ChannelDraw& draw, const ComplexVector& v,
                          int n, int n_r) {
  if (w.size() != static_cast<std::size_t>(n_r) * n_r || v.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("effective_channel: dimension mismatch");
  if (static_cast<int>(draw.gains.size()) != draw.clusters ||
      static_cast<int>(draw.departure_deg.size()) != draw.clusters ||
      static_cast<int>(draw.arrival_deg.size()) != draw.clusters)
    throw DomainError("effective_channel: inconsistent cluster lists");
  Complex acc{0.0, 0.0};
  for (int l = 0; l < draw.clusters; ++l) {
    const ComplexVector u = spatial_signature(n_r, draw.arrival_deg[l]);
    const ComplexVector mu = spatial_signature(n, draw.departure_deg[l]);
    Complex wu{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) wu += std::conj(w[i]) * u[i];
    Complex muv{0.0, 0.0};
    for (std::size_t i = 0; i < mu.size(); ++i) muv += std::conj(mu[i]) * v[i];
    acc += draw.gains[l] * wu * muv;
  }
  return std::sqrt(1.0 / draw.clusters) * acc;
}

Complex beam_response(const ChannelDraw& draw, int n, double tx_steer_deg, int n_r, double rx_steer_deg) {
  const double s_tx = std::sin(tx_steer_deg * kDeg);
  const double s_rx = std::sin(rx_steer_deg * kDeg);
  Complex acc{0.0, 0.0};
  for (int l = 0; l < draw.clusters; ++l) {
    const double phi = draw.departure_deg[l];
    const double theta = draw.arrival_deg[l];
    if (std::abs(phi) >= 90.0 || std::abs(theta) >= 90.0) continue;
    // mu^H v = sum_n exp(j pi n (sin steer - sin phi)); w^H u likewise on the receive side.
    const Complex tx = array_factor(n, s_tx - std::sin(phi * kDeg));
    const Complex rx = array_factor(n_r, std::sin(theta * kDeg) - s_rx);
    acc += draw.gains[l] * rx * tx;
  }
  return std::sqrt(1.0 / draw.clusters) * acc;
}

}  // namespace crabnet
