#include "crabnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "crabnet/channel.hpp"
#include "crabnet/configspace.hpp"
#include "crabnet/error.hpp"
#include "crabnet/link_stats.hpp"

namespace crabnet {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "crab") return Algorithm::crab;
  if (name == "dbscan") return Algorithm::dbscan;
  if (name == "ucb") return Algorithm::ucb;
  if (name == "random") return Algorithm::random;
  throw ValidationError("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::crab: return "crab";
    case Algorithm::dbscan: return "dbscan";
    case Algorithm::ucb: return "ucb";
    case Algorithm::random: return "random";
  }
  return "?";
}

int sinr_to_cqi(double sinr, const CqiTable& table) {
  if (!(sinr >= 0.0)) throw DomainError("sinr_to_cqi: negative sinr");
  const double cap = std::log2(1.0 + sinr);
  int cqi = 0;
  for (std::size_t i = 0; i < table.se.size(); ++i)
    if (table.se[i] <= cap) cqi = static_cast<int>(i) + 1;
  return cqi;
}

double cqi_to_se(int cqi, const CqiTable& table) {
  if (cqi < 0 || cqi > static_cast<int>(table.se.size())) throw DomainError("cqi out of range");
  return cqi == 0 ? 0.0 : table.se[cqi - 1];
}

std::optional<std::size_t> associate(ZoneId zone, std::span<const ActiveBeam> covering, const LinkModel& links) {
  return strongest_beam(covering, zone, links);
}

std::vector<std::size_t> pf_schedule(const std::vector<std::vector<double>>& rates, std::span<const double> ewma) {
  if (rates.size() != ewma.size()) throw ValidationError("pf_schedule: one average per zone required");
  if (rates.empty()) return {};
  const std::size_t rbs = rates.front().size();
  std::vector<std::size_t> owner(rbs, 0);
  for (std::size_t q = 0; q < rbs; ++q) {
    double best = -1.0;
    for (std::size_t z = 0; z < rates.size(); ++z) {
      if (rates[z].size() != rbs) throw ValidationError("pf_schedule: ragged rate table");
      if (rates[z][q] < 0.0) throw DomainError("pf_schedule: negative rate");
      const double metric = rates[z][q] / std::max(ewma[z], std::numeric_limits<double>::min());
      if (metric > best) {
        best = metric;
        owner[q] = z;
      }
    }
  }
  return owner;
}

double ewma_update(double average, double achieved, double alpha) { return (1.0 - alpha) * average + alpha * achieved; }

void SimConfig::validate() const {
  if (!(duration_s > 0.0)) throw ValidationError("duration must be positive");
  if (!(slot_s > 0.0) || !(decision_period_s > 0.0)) throw ValidationError("slot and decision period must be positive");
  const double k = decision_period_s / slot_s;
  if (std::abs(k - std::round(k)) > 1e-9 || std::round(k) < 1.0)
    throw ValidationError("slot must divide the decision period");
  if (!(channel_tick_s > 0.0) || channel_tick_s > slot_s) throw ValidationError("channel tick must be in (0, slot]");
  if (beam_reselect_s < 0.0 || handover_s < 0.0) throw ValidationError("overheads must be nonnegative");
  if (!(pf_alpha > 0.0 && pf_alpha <= 1.0)) throw ValidationError("pf alpha must be in (0, 1]");
  if (crab.max_iters < 1) throw ValidationError("max_iters must be positive");
  if (max_configs && *max_configs < 1) throw ValidationError("max_configs must be positive");
}

int SimConfig::slots_per_period() const { return static_cast<int>(std::lround(decision_period_s / slot_s)); }

int SimConfig::periods() const {
  const long slots = std::lround(std::ceil(duration_s / slot_s - 1e-9));
  const int k = slots_per_period();
  return static_cast<int>((slots + k - 1) / k);
}

double MetricsReport::config_changes_per_s(int site_id) const {
  auto it = gnbs.find(site_id);
  if (it == gnbs.end() || duration_s <= 0.0) return 0.0;
  return it->second.config_changes / duration_s;
}

double jain_index(std::span<const double> x) {
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  if (x.empty() || s2 == 0.0) return 1.0;
  return s * s / (static_cast<double>(x.size()) * s2);
}

// ---------------------------------------------------------------------------
// Policies

namespace {

class CrabPolicy final : public Policy {
 public:
  explicit CrabPolicy(const SimConfig& c) : cfg_(c) {}

  void decide(const PeriodContext& ctx) override {
    const std::size_t sites = ctx.candidates.size();
    domains_.assign(sites, 0);
    for (std::size_t g = 0; g < sites; ++g) domains_[g] = ctx.candidates[g].size();

    std::vector<std::vector<ZoneId>> coverage(sites);
    for (std::size_t g = 0; g < sites; ++g) {
      for (const BeamConfig& c : ctx.candidates[g])
        for (const Beam& b : c.beams) {
          if (b.is_null()) continue;
          const auto& zs = ctx.links.covered(g, b);
          coverage[g].insert(coverage[g].end(), zs.begin(), zs.end());
        }
      std::sort(coverage[g].begin(), coverage[g].end());
      coverage[g].erase(std::unique(coverage[g].begin(), coverage[g].end()), coverage[g].end());
    }
    const ConnectivityInputs in{ctx.links.scenario(), coverage};
    const double thr = cfg_.threshold.value_or(default_threshold(cfg_.criterion));
    const InteractionGraph full = build_graph(cfg_.criterion, thr, in);

    TableSet tables;
    std::vector<Edge> kept;
    for (const Edge& e : full.edges()) {
      CompatibilityTable t = compatibility_table(e.a, e.b, ctx.candidates[e.a], ctx.candidates[e.b], ctx.links);
      if (t.all_zero()) continue;
      tables.emplace(EdgeKey{e.a, e.b}, std::move(t));
      kept.push_back(e);
    }
    const InteractionGraph graph(sites, kept, full.criterion(), full.threshold());
    isolated_.assign(sites, false);
    for (std::size_t g = 0; g < sites; ++g) isolated_[g] = graph.neighbors(g).empty();

    PeriodDiagnostics d;
    d.period = ctx.period;
    Rng rng = derive_stream(cfg_.seed, {stream_tag("bp"), static_cast<std::uint64_t>(ctx.period)});
    try {
      CrabResult r = run_crab(graph, tables, domains_, cfg_.crab, rng);
      pi_ = std::move(r.marginals);
      d.iterations = r.diagnostics.iterations;
      d.prunes = r.diagnostics.prunes;
      d.converged = r.diagnostics.converged;
      d.edges = r.graph.edges().size();
    } catch (const DegeneracyError&) {
      // Zero-mass beliefs: enact the best-ranked candidates this period.
      pi_.assign(sites, {});
      for (std::size_t g = 0; g < sites; ++g) {
        pi_[g].assign(domains_[g], 0.0);
        pi_[g][0] = 1.0;
      }
      d.converged = false;
      d.edges = graph.edges().size();
    }
    for (std::size_t g = 0; g < sites; ++g) d.entropy.push_back(entropy(pi_[g]));
    diag_ = d;
    candidates_.assign(ctx.candidates.begin(), ctx.candidates.end());
  }

  Enactment enact(std::size_t site, int slot) override {
    std::size_t idx = 0;
    if (!isolated_[site] && domains_[site] > 1) {
      Rng rng = derive_stream(cfg_.seed, {stream_tag("enact"), site, static_cast<std::uint64_t>(slot)});
      idx = sample_config(pi_[site], rng);
    }
    return {candidates_[site][idx], static_cast<int>(idx)};
  }

  std::optional<PeriodDiagnostics> diagnostics() const override { return diag_; }

 private:
  const SimConfig& cfg_;
  std::vector<std::size_t> domains_;
  std::vector<bool> isolated_;
  std::vector<std::vector<double>> pi_;
  std::vector<std::vector<BeamConfig>> candidates_;
  PeriodDiagnostics diag_;
};

class DbscanPolicy final : public Policy {
 public:
  explicit DbscanPolicy(const SimConfig& c) : cfg_(c) {}

  void decide(const PeriodContext& ctx) override {
    const Scenario& sc = ctx.links.scenario();
    chosen_.clear();
    for (std::size_t g = 0; g < sc.sites().size(); ++g) {
      const GnbSite& site = sc.site(g);
      std::vector<Vec2> near;
      for (const VehiclePosition& v : ctx.vehicles)
        if (distance(site.position, v.position) <= sc.channel.range_m) near.push_back(v.position);
      chosen_.push_back(dbscan_config(site, near, cfg_.dbscan));
    }
  }

  Enactment enact(std::size_t site, int) override { return {chosen_[site], -1}; }

 private:
  const SimConfig& cfg_;
  std::vector<BeamConfig> chosen_;
};

class UcbPolicy final : public Policy {
 public:
  explicit UcbPolicy(const SimConfig& c) : cfg_(c) {}

  void decide(const PeriodContext& ctx) override {
    choice_ = ucb_network(ctx.candidates, ctx.links, cfg_.ucb);
    candidates_.assign(ctx.candidates.begin(), ctx.candidates.end());
  }

  Enactment enact(std::size_t site, int) override {
    return {candidates_[site][choice_[site]], static_cast<int>(choice_[site])};
  }

 private:
  const SimConfig& cfg_;
  std::vector<std::size_t> choice_;
  std::vector<std::vector<BeamConfig>> candidates_;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(const SimConfig& c) : cfg_(c) {}

  void decide(const PeriodContext& ctx) override { candidates_.assign(ctx.candidates.begin(), ctx.candidates.end()); }

  Enactment enact(std::size_t site, int slot) override {
    Rng rng = derive_stream(cfg_.seed, {stream_tag("random"), site, static_cast<std::uint64_t>(slot)});
    std::uniform_int_distribution<std::size_t> pick(0, candidates_[site].size() - 1);
    const std::size_t idx = pick(rng);
    return {candidates_[site][idx], static_cast<int>(idx)};
  }

 private:
  const SimConfig& cfg_;
  std::vector<std::vector<BeamConfig>> candidates_;
};

// |h~|^2 per RB for one beam over a link realization, receiver normal `rxn`.
std::vector<double> rb_gains(const LinkRealization& link, const GnbSite& site, Vec2 center, const Beam& beam,
                             double rxn, int n_r) {
  const int clusters = link.clusters();
  const double to_zone = center == site.position ? 0.0 : bearing(site.position, center);
  const double to_site = wrap360(to_zone + 180.0);
  const double txn = panel_normal(site, beam.direction());
  const double steer = std::sin(wrap180(beam.direction() - txn) * kDeg);
  std::vector<Complex> coef(clusters, Complex{0.0, 0.0});
  for (int l = 0; l < clusters; ++l) {
    const double phi = wrap180(to_zone + link.departure_offset_deg[l] - txn);
    const double theta = wrap180(to_site + link.arrival_offset_deg[l] - rxn);
    if (std::abs(phi) >= 90.0 || std::abs(theta) >= 90.0) continue;
    coef[l] = array_factor(n_r, std::sin(theta * kDeg)) * array_factor(beam.side(), steer - std::sin(phi * kDeg));
  }
  std::vector<double> out(link.rb_count);
  for (int q = 0; q < link.rb_count; ++q) {
    Complex acc{0.0, 0.0};
    for (int l = 0; l < clusters; ++l) acc += link.gain(q, l) * coef[l];
    out[q] = std::norm(acc) / clusters;
  }
  return out;
}

}  // namespace

std::unique_ptr<Policy> make_policy(const SimConfig& config) {
  switch (config.algorithm) {
    case Algorithm::crab: return std::make_unique<CrabPolicy>(config);
    case Algorithm::dbscan: return std::make_unique<DbscanPolicy>(config);
    case Algorithm::ucb: return std::make_unique<UcbPolicy>(config);
    case Algorithm::random: return std::make_unique<RandomPolicy>(config);
  }
  throw ValidationError("unknown algorithm");
}

// ---------------------------------------------------------------------------
// Simulation loop

namespace {

std::vector<VehiclePosition> vehicles_at(const Scenario& sc, double t) {
  const Trace& tr = sc.trace();
  if (tr.empty() || t < tr.start() || t > tr.end()) return {};
  std::vector<VehiclePosition> out;
  for (const VehiclePosition& v : tr.positions_at(t))
    if (sc.grid().zone_of(v.position)) out.push_back(v);
  return out;
}

std::vector<ZoneId> zones_of(const Scenario& sc, std::span<const VehiclePosition> vs) {
  std::vector<ZoneId> zs;
  for (const VehiclePosition& v : vs) zs.push_back(*sc.grid().zone_of(v.position));
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  return zs;
}

}  // namespace

MetricsReport run(const SimConfig& config, const Scenario& scenario, Policy* policy, std::vector<SlotEvent>* events) {
  config.validate();
  std::unique_ptr<Policy> owned;
  if (!policy) {
    owned = make_policy(config);
    policy = owned.get();
  }

  const std::size_t sites = scenario.sites().size();
  const RadioParams& radio = scenario.radio;
  const int nb = radio.rb_count;
  const double w = radio.rb_bandwidth_hz;
  const double noise = radio.noise_power_w();
  const double range = scenario.channel.range_m;
  const int k_slots = config.slots_per_period();
  const long total_slots = std::lround(std::ceil(config.duration_s / config.slot_s - 1e-9));
  const double t0 = scenario.trace().empty() ? 0.0 : scenario.trace().start();

  CandidateLimits limits = scenario.limits;
  if (config.max_configs) limits.max_configs = *config.max_configs;

  MetricsReport report;
  report.algorithm = to_string(config.algorithm);
  report.seed = config.seed;
  report.duration_s = config.duration_s;
  for (const GnbSite& s : scenario.sites()) report.gnbs[s.id] = {};

  std::vector<BeamConfig> previous(sites);
  std::map<int, int> last_server;  // vehicle id -> site index
  std::map<ZoneId, double> ewma;

  for (int p = 0; p < config.periods(); ++p) {
    const int first_slot = p * k_slots;
    const double tp = t0 + first_slot * config.slot_s;
    const auto decision_vehicles = vehicles_at(scenario, tp);
    const LinkStats links(scenario, zones_of(scenario, decision_vehicles), config.seed, static_cast<std::uint64_t>(p));

    std::vector<std::vector<BeamConfig>> candidates(sites);
    for (std::size_t g = 0; g < sites; ++g) candidates[g] = enumerate_candidates(g, links, limits);

    const PeriodContext ctx{p, first_slot, tp, config, links, candidates, decision_vehicles};
    policy->decide(ctx);
    if (auto d = policy->diagnostics()) report.periods.push_back(*d);

    for (int k = 0; k < k_slots; ++k) {
      const int slot = first_slot + k;
      if (slot >= total_slots) break;
      const double t = t0 + slot * config.slot_s;

      NetworkConfig net = NetworkConfig::silent(sites);
      std::vector<int> config_id(sites, -1);
      std::vector<double> gnb_loss(sites, 0.0);
      for (std::size_t g = 0; g < sites; ++g) {
        Enactment e = policy->enact(g, slot);
        if (!is_feasible(e.config, scenario.site(g))) throw ValidationError("policy enacted an infeasible configuration");
        if (!(e.config == previous[g])) {
          gnb_loss[g] = std::min(config.beam_reselect_s, config.slot_s);
          GnbMetrics& gm = report.gnbs[scenario.site(g).id];
          ++gm.config_changes;
          gm.lost_airtime_s += config.beam_reselect_s;
        }
        previous[g] = e.config;
        net.configs[g] = std::move(e.config);
        config_id[g] = e.config_id;
      }

      const auto vehicles = vehicles_at(scenario, t);
      std::map<ZoneId, std::vector<int>> riders;
      for (const VehiclePosition& v : vehicles) {
        riders[*scenario.grid().zone_of(v.position)].push_back(v.vehicle_id);
        report.vehicles[v.vehicle_id].present_s += config.slot_s;
      }

      const std::vector<ActiveBeam> active = active_beams(net, scenario);
      struct Served {
        ZoneId zone;
        std::vector<ActiveBeam> covering;
        std::size_t serving;
      };
      std::vector<std::vector<Served>> by_site(sites);
      for (const auto& [zone, ids] : riders) {
        const Vec2 c = scenario.grid().center(zone);
        std::vector<ActiveBeam> covering;
        for (const ActiveBeam& b : active)
          if (covers(scenario.site(b.site), b.geometry, c, range)) covering.push_back(b);
        auto s = associate(zone, covering, links);
        if (!s) continue;
        const std::size_t g = covering[*s].site;
        by_site[g].push_back({zone, std::move(covering), *s});
      }

      std::map<std::pair<std::size_t, ZoneId>, LinkRealization> draws;
      auto draw = [&](std::size_t g, ZoneId z) -> const LinkRealization& {
        auto key = std::make_pair(g, z);
        if (auto it = draws.find(key); it != draws.end()) return it->second;
        Rng rng = derive_stream(config.seed, {stream_tag("slot"), static_cast<std::uint64_t>(slot), g,
                                              static_cast<std::uint64_t>(z)});
        return draws.emplace(key, draw_link(links.large_scale(g, z), nb, scenario.channel, rng)).first->second;
      };

      for (std::size_t g = 0; g < sites; ++g) {
        const auto& served = by_site[g];
        if (served.empty()) continue;
        std::vector<std::vector<double>> rates(served.size());
        std::vector<std::vector<double>> sinr(served.size());
        std::vector<double> avg(served.size());
        for (std::size_t i = 0; i < served.size(); ++i) {
          const Served& sv = served[i];
          const Vec2 c = scenario.grid().center(sv.zone);
          const double rxn = rx_normal(c, scenario.site(g).position);
          const ActiveBeam& sb = sv.covering[sv.serving];
          const auto sig = rb_gains(draw(g, sv.zone), scenario.site(g), c, sb.geometry, rxn, radio.rx_side);
          std::vector<double> interf(nb, 0.0);
          if (config.interference) {
            for (const ActiveBeam& b : sv.covering) {
              if (b.site == g) continue;
              const auto gi = rb_gains(draw(b.site, sv.zone), scenario.site(b.site), c, b.geometry, rxn, radio.rx_side);
              for (int q = 0; q < nb; ++q) interf[q] += b.power_w / nb * gi[q];
            }
          }
          rates[i].resize(nb);
          sinr[i].resize(nb);
          for (int q = 0; q < nb; ++q) {
            sinr[i][q] = sb.power_w / nb * sig[q] / (noise + interf[q]);
            rates[i][q] = w * cqi_to_se(sinr_to_cqi(sinr[i][q], scenario.cqi), scenario.cqi);
          }
          auto it = ewma.find(sv.zone);
          avg[i] = it == ewma.end() ? 1.0 : it->second;
        }

        const auto owner = pf_schedule(rates, avg);
        std::vector<double> rho(served.size(), 0.0), sinr_sum(served.size(), 0.0);
        std::vector<int> rbs(served.size(), 0);
        for (int q = 0; q < nb; ++q) {
          rho[owner[q]] += rates[owner[q]][q];
          sinr_sum[owner[q]] += sinr[owner[q]][q];
          ++rbs[owner[q]];
        }

        const int site_id = scenario.site(g).id;
        for (std::size_t i = 0; i < served.size(); ++i) {
          const ZoneId z = served[i].zone;
          ewma[z] = ewma_update(avg[i], rho[i], config.pf_alpha);
          const auto& ids = riders[z];
          const double share = rho[i] / static_cast<double>(ids.size());
          double zone_bits = 0.0;
          for (int vid : ids) {
            double loss = gnb_loss[g];
            VehicleMetrics& vm = report.vehicles[vid];
            auto ls = last_server.find(vid);
            if (ls != last_server.end() && ls->second != static_cast<int>(g)) {
              ++vm.handovers;
              vm.handover_lost_s += config.handover_s;
              loss += config.handover_s;
            }
            last_server[vid] = static_cast<int>(g);
            const double eff = std::max(0.0, config.slot_s - loss);
            const double bits = share * eff;
            vm.bits += bits;
            vm.served_s += eff;
            zone_bits += bits;
            report.overhead_lost_bits += share * (config.slot_s - eff);
          }
          report.gnbs[site_id].bits += zone_bits;
          report.total_bits += zone_bits;
          if (events && rbs[i] > 0) {
            const double mean_sinr = sinr_sum[i] / rbs[i];
            events->push_back({t, site_id, config_id[g], z, rbs[i],
                               mean_sinr > 0.0 ? 10.0 * std::log10(mean_sinr) : -std::numeric_limits<double>::infinity(),
                               zone_bits});
          }
        }
      }
    }
  }

  std::size_t covered = 0;
  std::vector<double> rates;
  for (const auto& [id, vm] : report.vehicles) {
    if (vm.bits > 0.0) ++covered;
    rates.push_back(vm.present_s > 0.0 ? vm.bits / vm.present_s : 0.0);
  }
  report.covered_fraction = report.vehicles.empty() ? 0.0 : static_cast<double>(covered) / report.vehicles.size();
  report.jain_index = jain_index(rates);
  return report;
}

// ---------------------------------------------------------------------------
// Output

namespace {

nlohmann::json to_json(const PeriodDiagnostics& d) {
  return nlohmann::json{{"period", d.period},   {"iterations", d.iterations}, {"prunes", d.prunes},
                        {"converged", d.converged}, {"edges", d.edges},      {"entropy_bits", d.entropy}};
}

}  // namespace

std::string report_json(const MetricsReport& r) {
  nlohmann::json j;
  j["algorithm"] = r.algorithm;
  j["seed"] = r.seed;
  j["duration_s"] = r.duration_s;
  j["total_bits"] = r.total_bits;
  j["overhead_lost_bits"] = r.overhead_lost_bits;
  j["covered_fraction"] = r.covered_fraction;
  j["jain_index"] = r.jain_index;
  nlohmann::json gnbs = nlohmann::json::object();
  for (const auto& [id, g] : r.gnbs)
    gnbs[std::to_string(id)] = {{"bits", g.bits},
                                {"config_changes", g.config_changes},
                                {"config_changes_per_s", r.config_changes_per_s(id)},
                                {"lost_airtime_s", g.lost_airtime_s}};
  j["gnbs"] = gnbs;
  nlohmann::json veh = nlohmann::json::object();
  for (const auto& [id, v] : r.vehicles)
    veh[std::to_string(id)] = {{"bits", v.bits},
                               {"present_s", v.present_s},
                               {"served_s", v.served_s},
                               {"handovers", v.handovers},
                               {"handover_lost_s", v.handover_lost_s}};
  j["vehicles"] = veh;
  nlohmann::json periods = nlohmann::json::array();
  for (const auto& d : r.periods) periods.push_back(to_json(d));
  j["periods"] = periods;
  return j.dump(2) + "\n";
}

std::string diagnostics_json_line(const PeriodDiagnostics& d) { return to_json(d).dump(); }

void write_events_csv(std::span<const SlotEvent> events, std::ostream& out) {
  out << "t,gnb,config_id,zone,rb_count,sinr_db,bits\n";
  char buf[256];
  for (const SlotEvent& e : events) {
    std::snprintf(buf, sizeof buf, "%.6f,%d,%d,%d,%d,%.6f,%.17g\n", e.t, e.gnb, e.config_id, e.zone, e.rb_count,
                  e.sinr_db, e.bits);
    out << buf;
  }
}

}  // namespace crabnet
