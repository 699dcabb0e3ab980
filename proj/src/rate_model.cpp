#include "crabnet/rate_model.hpp"

#include <cmath>
#include <map>

#include "crabnet/error.hpp"

namespace crabnet {

std::vector<double> power_split(const BeamConfig& cfg, double p_dbm) {
  const std::size_t k = cfg.active_count();
  if (k == 0) return {};
  const double total_w = std::pow(10.0, (p_dbm - 30.0) / 10.0);
  return std::vector<double>(k, total_w / static_cast<double>(k));
}

std::vector<ActiveBeam> active_beams(const NetworkConfig& cfg, const Scenario& scenario) {
  std::vector<ActiveBeam> out;
  for (std::size_t s = 0; s < cfg.configs.size(); ++s) {
    const BeamConfig& bc = cfg.configs[s];
    const auto powers = power_split(bc, scenario.site(s).p_dbm);
    std::size_t k = 0;
    for (std::size_t j = 0; j < bc.beams.size(); ++j) {
      if (bc.beams[j].is_null()) continue;
      out.push_back({s, j, bc.beams[j], powers[k++]});
    }
  }
  return out;
}

std::optional<std::size_t> strongest_beam(std::span<const ActiveBeam> covering, ZoneId zone,
                                          const LinkModel& links) {
  std::optional<std::size_t> best;
  double best_power = -1.0;
  for (std::size_t i = 0; i < covering.size(); ++i) {
    const ActiveBeam& b = covering[i];
    const double p = b.power_w * links.mean_gain(b.site, b.geometry, zone, b.site);
    const bool better = p > best_power ||
                        (p == best_power && best &&
                         (b.site < covering[*best].site ||
                          (b.site == covering[*best].site && b.beam < covering[*best].beam)));
    if (!best || better) {
      best = i;
      best_power = p;
    }
  }
  return best;
}

double zone_rate(std::span<const ActiveBeam> covering, std::size_t serving, ZoneId zone,
                 const LinkModel& links, const RateOptions& opts) {
  const RadioParams& radio = links.scenario().radio;
  const double nb = radio.rb_count;
  const ActiveBeam& s = covering[serving];
  const double signal = s.power_w / nb * links.mean_gain(s.site, s.geometry, zone, s.site);
  double interference = 0.0;
  if (opts.interference) {
    for (std::size_t i = 0; i < covering.size(); ++i) {
      if (i == serving) continue;
      const ActiveBeam& b = covering[i];
      interference += b.power_w / nb * links.mean_gain(b.site, b.geometry, zone, s.site);
    }
  }
  return nb * rate_rb(signal, interference, radio);
}

namespace {

// zone -> beams covering it, in active_beams order.
std::map<ZoneId, std::vector<ActiveBeam>> coverage_index(const std::vector<ActiveBeam>& beams,
                                                        const LinkModel& links) {
  std::map<ZoneId, std::vector<ActiveBeam>> idx;
  for (const ActiveBeam& b : beams)
    for (ZoneId z : links.covered(b.site, b.geometry)) idx[z].push_back(b);
  return idx;
}

}  // namespace

double network_rate(const NetworkConfig& cfg, const LinkModel& links, const RateOptions& opts) {
  const auto beams = active_beams(cfg, links.scenario());
  double total = 0.0;
  for (const auto& [zone, covering] : coverage_index(beams, links)) {
    const auto serving = strongest_beam(covering, zone, links);
    total += zone_rate(covering, *serving, zone, links, opts);
  }
  return total;
}

double site_rate(std::size_t site, const NetworkConfig& cfg, const LinkModel& links, const RateOptions& opts) {
  const auto beams = active_beams(cfg, links.scenario());
  double total = 0.0;
  for (const auto& [zone, covering] : coverage_index(beams, links)) {
    const auto serving = strongest_beam(covering, zone, links);
    if (covering[*serving].site != site) continue;
    total += zone_rate(covering, *serving, zone, links, opts);
  }
  return total;
}

}  // namespace crabnet
