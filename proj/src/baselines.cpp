#include "crabnet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "crabnet/configspace.hpp"
#include "crabnet/error.hpp"

namespace crabnet {

std::vector<int> dbscan(std::span<const Vec2> points, double eps, int min_pts) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (distance(points[i], points[j]) <= eps) nbr[i].push_back(j);

  constexpr int kUnset = -2;
  std::vector<int> label(n, kUnset);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnset) continue;
    if (static_cast<int>(nbr[i].size()) < min_pts) {
      label[i] = -1;
      continue;
    }
    label[i] = cluster;
    std::vector<std::size_t> frontier(nbr[i].begin(), nbr[i].end());
    while (!frontier.empty()) {
      const std::size_t j = frontier.back();
      frontier.pop_back();
      if (label[j] == -1) label[j] = cluster;  // border point
      if (label[j] != kUnset) continue;
      label[j] = cluster;
      if (static_cast<int>(nbr[j].size()) >= min_pts) frontier.insert(frontier.end(), nbr[j].begin(), nbr[j].end());
    }
    ++cluster;
  }
  return label;
}

BeamConfig dbscan_config(const GnbSite& site, std::span<const Vec2> vehicles, const DbscanParams& params) {
  BeamConfig cfg = BeamConfig::silent(site.id);
  const auto labels = dbscan(vehicles, params.eps_m, params.min_pts);
  const int clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  if (clusters <= 0) return cfg;

  std::vector<std::size_t> size(clusters, 0);
  std::vector<Vec2> sum(clusters);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    ++size[labels[i]];
    sum[labels[i]] = sum[labels[i]] + vehicles[i];
  }
  std::vector<int> order(clusters);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return size[a] > size[b]; });

  int budget = site.nt * site.nt;
  for (int c : order) {
    if (static_cast<int>(cfg.beams.size()) >= site.max_beams) break;
    const Vec2 centroid = (1.0 / static_cast<double>(size[c])) * sum[c];
    if (centroid == site.position) continue;
    const Beam beam = Beam::make(bearing(site.position, centroid), params.beam_width_deg);
    const int cost = beam.elements();
    if (cost > budget) continue;
    const bool clash = std::any_of(cfg.beams.begin(), cfg.beams.end(),
                                   [&](const Beam& other) { return beams_conflict(beam, other); });
    if (clash) continue;
    cfg.beams.push_back(beam);
    budget -= cost;
  }
  return cfg;
}

void ArmStats::record(std::size_t arm, double reward) {
  ++t;
  ++pulls.at(arm);
  mean[arm] += (reward - mean[arm]) / static_cast<double>(pulls[arm]);
}

std::size_t ArmStats::most_pulled() const {
  if (pulls.empty()) throw ValidationError("no arms");
  return static_cast<std::size_t>(std::max_element(pulls.begin(), pulls.end()) - pulls.begin());
}

std::size_t ucb_select(const ArmStats& stats, double c) {
  if (stats.arms() == 0) throw ValidationError("ucb_select: no arms");
  for (std::size_t i = 0; i < stats.arms(); ++i)
    if (stats.pulls[i] == 0) return i;
  const double log_t = std::log(static_cast<double>(stats.t));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < stats.arms(); ++i) {
    const double score = stats.mean[i] + c * std::sqrt(log_t / static_cast<double>(stats.pulls[i]));
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

double ucb_reward(std::size_t g, const BeamConfig& chosen, const NetworkConfig& live, const LinkModel& links) {
  NetworkConfig cfg = live;
  cfg.configs.at(g) = chosen;
  return site_rate(g, cfg, links);
}

ArmStats ucb_run(std::size_t arms, std::uint64_t steps, const std::function<double(std::size_t)>& reward,
                 double c, std::uint64_t cap) {
  ArmStats stats(arms);
  const std::uint64_t n = std::min(steps, cap);
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::size_t arm = ucb_select(stats, c);
    stats.record(arm, reward(arm));
  }
  return stats;
}

std::vector<std::size_t> ucb_network(std::span<const std::vector<BeamConfig>> candidates, const LinkModel& links,
                                     const UcbOptions& options, std::vector<ArmStats>* stats_out) {
  const std::size_t sites = candidates.size();
  std::vector<ArmStats> stats;
  std::vector<double> scale(sites, 1.0);
  for (std::size_t g = 0; g < sites; ++g) {
    if (candidates[g].empty()) throw ValidationError("empty candidate list");
    stats.emplace_back(candidates[g].size());
    double best = 0.0;
    for (const BeamConfig& c : candidates[g]) best = std::max(best, standalone_rate(g, c, links));
    if (best > 0.0) scale[g] = best;
  }

  const std::uint64_t iterations = std::min(options.iterations, kUcbIterationCap);
  NetworkConfig joint = NetworkConfig::silent(sites);
  std::vector<std::size_t> arm(sites, 0);
  for (std::uint64_t it = 0; it < iterations; ++it) {
    for (std::size_t g = 0; g < sites; ++g) {
      arm[g] = ucb_select(stats[g], options.c);
      joint.configs[g] = candidates[g][arm[g]];
    }
    for (std::size_t g = 0; g < sites; ++g) stats[g].record(arm[g], site_rate(g, joint, links) / scale[g]);
  }

  std::vector<std::size_t> choice(sites);
  for (std::size_t g = 0; g < sites; ++g) choice[g] = stats[g].most_pulled();
  if (stats_out) *stats_out = std::move(stats);
  return choice;
}

}  // namespace crabnet
