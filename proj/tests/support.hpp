#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "crabnet/crab.hpp"
#include "crabnet/graph.hpp"
#include "crabnet/phy.hpp"
#include "crabnet/rate_model.hpp"
#include "crabnet/scenario.hpp"
#include "crabnet/simulate.hpp"

namespace testing {

using namespace crabnet;

inline GnbSite site(int id, double x, double y, double psi = 0.0, int nt = 64, int b = 4, double p_dbm = 33.0) {
  GnbSite s;
  s.id = id;
  s.position = {x, y};
  s.psi_deg = psi;
  s.p_dbm = p_dbm;
  s.nt = nt;
  s.max_beams = b;
  s.rf_chains = b;
  return s;
}

/// Vehicles parked for [0, duration] at the given positions (ids from 1).
inline Trace parked(const std::vector<Vec2>& at, double duration = 10.0) {
  std::vector<VehicleSample> s;
  for (std::size_t i = 0; i < at.size(); ++i) {
    s.push_back({0.0, static_cast<int>(i) + 1, at[i]});
    s.push_back({duration, static_cast<int>(i) + 1, at[i]});
  }
  return Trace(std::move(s));
}

inline Scenario world(std::vector<GnbSite> sites, Trace trace, double w = 200.0, double h = 200.0,
                      std::vector<Polygon> blocks = {}) {
  Scenario sc(ZoneGrid({0.0, 0.0}, w, h, 10.0), std::move(sites), std::move(trace), LosMap(std::move(blocks)));
  sc.channel.averaging_window = 50;
  return sc;
}

/// LinkModel with deterministic gains from a user function; coverage is geometric.
class FakeLinks final : public LinkModel {
 public:
  using GainFn = std::function<double(std::size_t site, const Beam&, ZoneId, std::size_t rx)>;
  FakeLinks(const Scenario& sc, std::vector<ZoneId> zones, GainFn fn) : sc_(&sc), zones_(std::move(zones)), fn_(std::move(fn)) {}
  const Scenario& scenario() const override { return *sc_; }
  const std::vector<ZoneId>& zones() const override { return zones_; }
  const std::vector<ZoneId>& covered(std::size_t s, const Beam& b) const override {
    auto key = std::make_tuple(s, b.direction(), b.hpbw(), b.is_null());
    auto it = cov_.find(key);
    if (it != cov_.end()) return it->second;
    std::vector<ZoneId> out;
    for (ZoneId z : zones_)
      if (covers(sc_->site(s), b, sc_->grid().center(z), sc_->channel.range_m)) out.push_back(z);
    return cov_.emplace(key, std::move(out)).first->second;
  }
  double mean_gain(std::size_t s, const Beam& b, ZoneId z, std::size_t rx) const override {
    return b.is_null() ? 0.0 : fn_(s, b, z, rx);
  }

 private:
  const Scenario* sc_;
  std::vector<ZoneId> zones_;
  GainFn fn_;
  mutable std::map<std::tuple<std::size_t, double, double, bool>, std::vector<ZoneId>> cov_;
};

// ---------------------------------------------------------------------------
// Independent references

/// Textbook UPA response: element (r, c) of an N x N grid carries exp(j pi c sin phi).
inline std::vector<std::complex<double>> upa_response(int n, double phi_deg) {
  std::vector<std::complex<double>> v;
  const double s = std::sin(phi_deg * std::numbers::pi / 180.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) v.push_back(std::polar(1.0, std::numbers::pi * c * s));
  return v;
}

/// Brute-force w^H H v with H assembled entry by entry.
inline std::complex<double> dense_effective(const std::vector<std::complex<double>>& w,
                                            const std::vector<std::complex<double>>& v,
                                            const std::vector<std::complex<double>>& gains,
                                            const std::vector<double>& aoa, const std::vector<double>& aod, int n,
                                            int nr) {
  const std::size_t rows = static_cast<std::size_t>(nr) * nr, cols = static_cast<std::size_t>(n) * n;
  std::vector<std::complex<double>> h(rows * cols, 0.0);
  const double scale = std::sqrt(1.0 / static_cast<double>(gains.size()));
  for (std::size_t l = 0; l < gains.size(); ++l) {
    const auto u = upa_response(nr, aoa[l]);
    const auto mu = upa_response(n, aod[l]);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) h[r * cols + c] += scale * gains[l] * u[r] * std::conj(mu[c]);
  }
  std::complex<double> acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    std::complex<double> hv = 0.0;
    for (std::size_t c = 0; c < cols; ++c) hv += h[r * cols + c] * v[c];
    acc += std::conj(w[r]) * hv;
  }
  return acc;
}

/// Budget and pairwise separation checked from first principles.
inline bool brute_force_feasible(const BeamConfig& cfg, const GnbSite& s) {
  std::vector<std::pair<double, double>> beams;  // direction, width
  long elements = 0;
  for (const Beam& b : cfg.beams) {
    if (b.is_null()) continue;
    const long side = std::max(1L, std::lround(102.0 / b.hpbw()));
    elements += side * side;
    beams.emplace_back(b.direction(), b.hpbw());
  }
  if (static_cast<int>(cfg.beams.size()) > s.max_beams) return false;
  if (elements > static_cast<long>(s.nt) * s.nt) return false;
  for (std::size_t i = 0; i < beams.size(); ++i)
    for (std::size_t j = i + 1; j < beams.size(); ++j) {
      double d = std::fmod(std::abs(beams[i].first - beams[j].first), 360.0);
      d = std::min(d, 360.0 - d);
      if (d < 0.5 * (beams[i].second + beams[j].second)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Random BP instances

inline InteractionGraph random_tree(std::size_t n, crabnet::Rng& rng) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    const std::size_t p = parent(rng);
    edges.push_back({p, v, w(rng)});
  }
  return InteractionGraph(n, edges);
}

inline std::vector<std::size_t> random_domains(std::size_t n, std::size_t max_k, crabnet::Rng& rng) {
  std::uniform_int_distribution<std::size_t> k(1, max_k);
  std::vector<std::size_t> d(n);
  for (auto& x : d) x = k(rng);
  return d;
}

/// chi entries uniform in (0, hi].
inline TableSet random_tables(const InteractionGraph& g, const std::vector<std::size_t>& domains, crabnet::Rng& rng,
                              double hi = 10.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TableSet t;
  for (const Edge& e : g.edges()) {
    CompatibilityTable c(domains[e.a], domains[e.b]);
    for (std::size_t x = 0; x < c.rows(); ++x)
      for (std::size_t y = 0; y < c.cols(); ++y) c(x, y) = hi * (1.0 - u(rng));
    t.emplace(EdgeKey{e.a, e.b}, c);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Simulation helpers

/// Enacts whatever `script(site, slot)` returns; config_id is the slot number.
class ScriptedPolicy final : public Policy {
 public:
  using Script = std::function<BeamConfig(std::size_t site, int slot)>;
  explicit ScriptedPolicy(Script s) : script_(std::move(s)) {}
  void decide(const PeriodContext&) override {}
  Enactment enact(std::size_t site, int slot) override { return {script_(site, slot), slot}; }

 private:
  Script script_;
};

}  // namespace testing
