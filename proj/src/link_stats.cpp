#include "crabnet/link_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crabnet {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

std::uint64_t beam_key(const Beam& beam) {
  if (beam.is_null()) return 0;
  const auto dir = static_cast<std::uint64_t>(std::llround(beam.direction() * 1e6));
  const auto width = static_cast<std::uint64_t>(std::llround(beam.hpbw() * 1e6));
  return (dir << 28) ^ width ^ (1ULL << 63);
}

LinkStats::LinkStats(const Scenario& scenario, std::vector<ZoneId> occupied, std::uint64_t seed,
                     std::uint64_t period)
    : scenario_(&scenario), occupied_(std::move(occupied)), seed_(seed), period_(period) {
  std::sort(occupied_.begin(), occupied_.end());
  occupied_.erase(std::unique(occupied_.begin(), occupied_.end()), occupied_.end());
}

const std::vector<ZoneId>& LinkStats::covered(std::size_t site, const Beam& beam) const {
  const Key key{site, beam_key(beam)};
  if (auto it = covered_.find(key); it != covered_.end()) return it->second;
  std::vector<ZoneId> zones;
  const GnbSite& s = scenario_->site(site);
  for (ZoneId z : occupied_)
    if (covers(s, beam, scenario_->grid().center(z), scenario_->channel.range_m)) zones.push_back(z);
  return covered_.emplace(key, std::move(zones)).first->second;
}

const LargeScale& LinkStats::large_scale(std::size_t site, ZoneId zone) const {
  const auto key = std::make_pair(site, zone);
  if (auto it = large_.find(key); it != large_.end()) return it->second;
  Rng rng = derive_stream(seed_, {stream_tag("shadow"), period_, site, static_cast<std::uint64_t>(zone)});
  const LargeScale ls = draw_large_scale(*scenario_, scenario_->site(site), scenario_->grid().center(zone), rng);
  return large_.emplace(key, ls).first->second;
}

const LinkStats::History& LinkStats::history(std::size_t site, ZoneId zone) const {
  const auto key = std::make_pair(site, zone);
  if (auto it = history_.find(key); it != history_.end()) return it->second;
  const LargeScale& ls = large_scale(site, zone);
  Rng rng = derive_stream(seed_, {stream_tag("average"), period_, site, static_cast<std::uint64_t>(zone)});
  History h;
  const int window = scenario_->channel.averaging_window;
  h.start.reserve(window + 1);
  for (int d = 0; d < window; ++d) {
    const LinkRealization link = draw_link(ls, 1, scenario_->channel, rng);
    h.start.push_back(static_cast<std::uint32_t>(h.gain.size()));
    h.departure.insert(h.departure.end(), link.departure_offset_deg.begin(), link.departure_offset_deg.end());
    h.arrival.insert(h.arrival.end(), link.arrival_offset_deg.begin(), link.arrival_offset_deg.end());
    h.gain.insert(h.gain.end(), link.gains.begin(), link.gains.end());
  }
  h.start.push_back(static_cast<std::uint32_t>(h.gain.size()));
  const GnbSite& s = scenario_->site(site);
  const Vec2 center = scenario_->grid().center(zone);
  const double to_zone = center == s.position ? 0.0 : bearing(s.position, center);
  h.cos_dep.resize(h.departure.size());
  h.sin_dep.resize(h.departure.size());
  for (std::size_t l = 0; l < h.departure.size(); ++l) {
    const double a = (to_zone + h.departure[l]) * kDeg;
    h.cos_dep[l] = std::cos(a);
    h.sin_dep[l] = std::sin(a);
  }
  return history_.emplace(key, std::move(h)).first->second;
}

const std::vector<Complex>& LinkStats::rx_weighted(std::size_t site, ZoneId zone, std::size_t rx_site) const {
  const auto key = std::make_tuple(site, zone, rx_site);
  if (auto it = rx_weighted_.find(key); it != rx_weighted_.end()) return it->second;
  const GnbSite& s = scenario_->site(site);
  const Vec2 center = scenario_->grid().center(zone);
  const double to_zone = center == s.position ? 0.0 : bearing(s.position, center);
  const double to_site = wrap360(to_zone + 180.0);
  const double rxn = rx_normal(center, scenario_->site(rx_site).position);
  const int nr = scenario_->radio.rx_side;
  const History& h = history(site, zone);
  std::vector<Complex> out(h.gain.size(), Complex{0.0, 0.0});
  for (std::size_t l = 0; l < out.size(); ++l) {
    const double theta = wrap180(to_site + h.arrival[l] - rxn);
    if (std::abs(theta) >= 90.0) continue;
    out[l] = h.gain[l] * array_factor(nr, std::sin(theta * kDeg));
  }
  return rx_weighted_.emplace(key, std::move(out)).first->second;
}

double LinkStats::mean_gain(std::size_t site, const Beam& beam, ZoneId zone, std::size_t rx_site) const {
  if (beam.is_null()) return 0.0;
  const Key key{(site << 40) ^ (static_cast<std::uint64_t>(zone) << 8) ^ rx_site, beam_key(beam)};
  if (auto it = gains_.find(key); it != gains_.end()) return it->second;

  const GnbSite& s = scenario_->site(site);
  const double txn = panel_normal(s, beam.direction());
  const double steer = std::sin(wrap180(beam.direction() - txn) * kDeg);
  const double ct = std::cos(txn * kDeg);
  const double st = std::sin(txn * kDeg);
  const int n = beam.side();

  const History& h = history(site, zone);
  const std::vector<Complex>& rxw = rx_weighted(site, zone, rx_site);
  double sum = 0.0;
  const std::size_t draws = h.start.size() - 1;
  for (std::size_t d = 0; d < draws; ++d) {
    Complex acc{0.0, 0.0};
    for (std::uint32_t l = h.start[d]; l < h.start[d + 1]; ++l) {
      if (rxw[l] == Complex{0.0, 0.0}) continue;
      // Departure angle relative to the panel normal: front half-plane iff its cosine is positive.
      const double cos_phi = h.cos_dep[l] * ct + h.sin_dep[l] * st;
      if (cos_phi <= 0.0) continue;
      const double sin_phi = h.sin_dep[l] * ct - h.cos_dep[l] * st;
      acc += rxw[l] * array_factor(n, steer - sin_phi);
    }
    sum += std::norm(acc) / static_cast<double>(h.start[d + 1] - h.start[d]);
  }
  const double mean = sum / static_cast<double>(draws);
  gains_.emplace(key, mean);
  return mean;
}

}  // namespace crabnet
