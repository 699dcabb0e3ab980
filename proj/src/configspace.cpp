#include "crabnet/configspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "crabnet/link_stats.hpp"

namespace crabnet {

bool is_feasible(const BeamConfig& cfg, const GnbSite& site) {
  if (cfg.beams.size() > static_cast<std::size_t>(site.max_beams)) return false;
  long budget = 0;
  for (const Beam& b : cfg.beams) budget += b.elements();
  if (budget > static_cast<long>(site.nt) * site.nt) return false;
  for (std::size_t i = 0; i < cfg.beams.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.beams.size(); ++j)
      if (beams_conflict(cfg.beams[i], cfg.beams[j])) return false;
  return true;
}

double standalone_rate(std::size_t site, const BeamConfig& cfg, const LinkModel& links) {
  NetworkConfig net = NetworkConfig::silent(links.scenario().sites().size());
  net.configs[site] = cfg;
  return network_rate(net, links, RateOptions{.interference = false});
}

namespace {

struct Ranked {
  BeamConfig cfg;
  double score;
  std::string label;
};

bool better(const Ranked& a, const Ranked& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.label < b.label;
}

}  // namespace

std::vector<BeamConfig> enumerate_candidates(std::size_t site, const LinkModel& links,
                                             const CandidateLimits& limits) {
  const Scenario& sc = links.scenario();
  const GnbSite& g = sc.site(site);
  const double range = sc.channel.range_m;

  std::set<double> directions;
  for (ZoneId z : links.zones()) {
    const Vec2 c = sc.grid().center(z);
    const double d = distance(g.position, c);
    if (d < 1e-9 || d > range) continue;
    const double q = limits.direction_quantum_deg;
    directions.insert(wrap360(std::round(bearing(g.position, c) / q) * q));
  }
  if (directions.empty() || g.max_beams < 1) return {BeamConfig::silent(g.id)};

  // Best single beam per (width, covered zone set).
  std::map<std::pair<double, std::vector<ZoneId>>, Ranked> singles_by_footprint;
  for (double dir : directions) {
    for (double width : limits.widths_deg) {
      BeamConfig cfg{{Beam::make(dir, width)}, g.id};
      if (!is_feasible(cfg, g)) continue;
      const auto& cov = links.covered(site, cfg.beams[0]);
      if (cov.empty()) continue;
      Ranked r{cfg, standalone_rate(site, cfg, links), cfg.label()};
      auto key = std::make_pair(width, cov);
      auto it = singles_by_footprint.find(key);
      if (it == singles_by_footprint.end() || better(r, it->second)) singles_by_footprint[key] = std::move(r);
    }
  }
  std::vector<Ranked> singles;
  for (auto& [_, r] : singles_by_footprint) singles.push_back(std::move(r));
  std::sort(singles.begin(), singles.end(), better);

  std::vector<Ranked> pool = singles;
  const std::size_t seeds = std::min<std::size_t>(singles.size(), std::max(16, 2 * limits.max_configs));
  for (std::size_t s = 0; s < seeds; ++s) {
    Ranked current = singles[s];
    while (current.cfg.beams.size() < static_cast<std::size_t>(g.max_beams)) {
      std::optional<Ranked> best;
      for (const Ranked& add : singles) {
        BeamConfig next = current.cfg;
        next.beams.push_back(add.cfg.beams[0]);
        if (!is_feasible(next, g)) continue;
        next.beams = next.canonical();
        Ranked r{next, standalone_rate(site, next, links), next.label()};
        if (r.score <= current.score) continue;
        if (!best || better(r, *best)) best = std::move(r);
      }
      if (!best) break;
      current = std::move(*best);
      pool.push_back(current);
    }
  }

  std::sort(pool.begin(), pool.end(), better);
  pool.erase(std::unique(pool.begin(), pool.end(), [](const Ranked& a, const Ranked& b) { return a.label == b.label; }),
             pool.end());

  const std::size_t cap = static_cast<std::size_t>(limits.max_configs);
  std::vector<BeamConfig> out;
  const std::size_t keep = cap == 1 ? 1 : std::min(pool.size(), cap - 1);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(pool[i].cfg);
  if (out.size() < cap) out.push_back(BeamConfig::silent(g.id));
  return out;
}

}  // namespace crabnet
