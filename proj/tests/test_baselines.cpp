#include <doctest.h>

#include <cmath>
#include <numbers>

#include "crabnet/baselines.hpp"
#include "crabnet/configspace.hpp"
#include "crabnet/rng.hpp"
#include "support.hpp"

using namespace crabnet;
using testing::site;

namespace {

Vec2 polar(double r, double deg) {
  const double a = deg * std::numbers::pi / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace

TEST_CASE("density clustering") {
  CHECK(dbscan(std::vector<Vec2>{}, 15, 2).empty());
  const std::vector<Vec2> pts{{0, 0}, {10, 0}, {20, 0}, {100, 100}, {300, 0}, {305, 0}};
  const auto l = dbscan(pts, 15, 2);
  CHECK(l == std::vector<int>{0, 0, 0, -1, 1, 1});
  CHECK(dbscan(pts, 15, 1) == std::vector<int>{0, 0, 0, 1, 2, 2});
  // border point joins but does not extend the cluster
  const std::vector<Vec2> chain{{0, 0}, {1, 0}, {2, 0}, {14, 0}, {28, 0}};
  CHECK(dbscan(chain, 12.5, 3) == std::vector<int>{0, 0, 0, 0, -1});
}

TEST_CASE("clustered beam configurations") {
  const GnbSite s = site(1, 0, 0);
  CHECK(dbscan_config(s, std::vector<Vec2>{}).is_silent());

  const std::vector<Vec2> tight{polar(100, 30), polar(105, 31), polar(102, 29)};
  const BeamConfig one = dbscan_config(s, tight);
  REQUIRE(one.active_count() == 1);
  CHECK(one.canonical()[0].direction() == doctest::Approx(30.0).epsilon(0.01));
  CHECK(one.canonical()[0].hpbw() == 10.0);

  const std::vector<Vec2> near{polar(200, 0), polar(205, 0), polar(210, 0), polar(200, 5), polar(205, 5)};
  const BeamConfig dropped = dbscan_config(s, near);
  REQUIRE(dropped.active_count() == 1);
  CHECK(dropped.canonical()[0].direction() == doctest::Approx(0.0).epsilon(1e-9));

  std::vector<Vec2> many;
  for (int k = 0; k < 6; ++k)
    for (int j = 0; j <= k; ++j) many.push_back(polar(100 + 5 * j, 60.0 * k));
  const BeamConfig capped = dbscan_config(s, many);
  CHECK(capped.active_count() == 4);
  for (const Beam& b : capped.canonical()) CHECK(b.direction() != doctest::Approx(60.0));
  CHECK(is_feasible(capped, s));
}

TEST_CASE("clustered configurations are always feasible") {
  Rng rng = derive_stream(1, {});
  std::uniform_real_distribution<double> u(-200, 200);
  std::uniform_int_distribution<int> n(0, 60), nt(8, 64), b(1, 4);
  for (int it = 0; it < 300; ++it) {
    const GnbSite s = site(1, 0, 0, 0.0, nt(rng), b(rng));
    std::vector<Vec2> v;
    const int k = n(rng);
    for (int i = 0; i < k; ++i) v.push_back({u(rng), u(rng)});
    const BeamConfig c = dbscan_config(s, v);
    CHECK(is_feasible(c, s));
    CHECK(testing::brute_force_feasible(c, s));
  }
}

TEST_CASE("upper confidence bound selection") {
  ArmStats fresh(3);
  CHECK(ucb_select(fresh, std::sqrt(2.0)) == 0);
  ArmStats s(2);
  s.pulls = {100, 1};
  s.mean = {1.0, 0.9};
  s.t = 101;
  CHECK(ucb_select(s, std::sqrt(2.0)) == 1);
  CHECK(ucb_select(s, 0.0) == 0);
  ArmStats tie(2);
  tie.pulls = {5, 5};
  tie.mean = {0.5, 0.5};
  tie.t = 10;
  CHECK(ucb_select(tie, 1.0) == 0);
  CHECK(tie.most_pulled() == 0);
  CHECK(kUcbIterationCap == 10000);
  CHECK(UcbOptions{}.iterations == 10000);

  ArmStats r(2);
  r.record(1, 2.0);
  r.record(1, 4.0);
  CHECK(r.mean[1] == 3.0);
  CHECK(r.t == 2);
  CHECK(r.most_pulled() == 1);
}

TEST_CASE("every arm is tried before any repeat") {
  std::vector<std::size_t> order;
  ucb_run(7, 7, [&](std::size_t a) { order.push_back(a); return 1.0; }, std::sqrt(2.0));
  CHECK(order == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  const ArmStats capped = ucb_run(3, 50000, [](std::size_t) { return 0.5; }, 1.0);
  CHECK(capped.t == 10000);
}

TEST_CASE("stationary bandit concentrates on the best arm") {
  const std::vector<double> p{0.2, 0.4, 0.6, 0.8};
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = derive_stream(seed, {stream_tag("bandit")});
    const ArmStats st = ucb_run(4, 5000, [&](std::size_t a) {
      return std::bernoulli_distribution(p[a])(rng) ? 1.0 : 0.0;
    }, std::sqrt(2.0));
    good += static_cast<double>(st.pulls[3]) / st.t > 0.5;
  }
  CHECK(good >= 9);
}

TEST_CASE("bandit reward against the live network") {
  Scenario sc = testing::world({site(1, 55, 5), site(2, 145, 5)}, testing::parked({{55, 105}, {145, 105}}));
  testing::FakeLinks links(sc, sc.occupancy(0.0), [](std::size_t, const Beam&, ZoneId, std::size_t) { return 1e-9; });
  const BeamConfig up{{Beam::make(90, 10)}}, wide{{Beam::make(70, 80)}};
  NetworkConfig live = NetworkConfig::silent(2);
  CHECK(ucb_reward(0, BeamConfig::silent(), live, links) == 0.0);
  CHECK(ucb_reward(0, up, live, links) == doctest::Approx(standalone_rate(0, up, links)));
  live.configs[1] = up;
  CHECK(ucb_reward(0, up, live, links) == doctest::Approx(standalone_rate(0, up, links)));
  live.configs[0] = wide;
  CHECK(ucb_reward(1, up, live, links) < standalone_rate(1, up, links));
  CHECK(ucb_reward(1, up, live, links) >= 0.0);

  const std::vector<std::vector<BeamConfig>> cand{{BeamConfig::silent(), up, wide}, {BeamConfig::silent(), up}};
  std::vector<ArmStats> stats;
  UcbOptions o;
  o.iterations = 500;
  const auto pick = ucb_network(cand, links, o, &stats);
  REQUIRE(pick.size() == 2);
  CHECK(pick[1] == 1);
  CHECK(stats[0].t == 500);
  CHECK(cand[0][pick[0]].active_count() == 1);
}
