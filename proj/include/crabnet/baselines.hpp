#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "crabnet/beam_config.hpp"
#include "crabnet/geometry.hpp"
#include "crabnet/rate_model.hpp"

namespace crabnet {

struct DbscanParams {
  double eps_m = 15.0;
  int min_pts = 2;  // including the point itself
  double beam_width_deg = 10.0;
};

/// Density clustering labels: cluster index from 0, or -1 for noise. Clusters are
/// numbered in order of their first core point.
std::vector<int> dbscan(std::span<const Vec2> points, double eps, int min_pts);

/// Up to B beams of fixed width, at the centroid bearings of the largest vehicle
/// clusters; a beam overlapping one already placed is dropped.
BeamConfig dbscan_config(const GnbSite& site, std::span<const Vec2> vehicles, const DbscanParams& params = {});

struct ArmStats {
  std::vector<std::uint64_t> pulls;
  std::vector<double> mean;
  std::uint64_t t = 0;

  explicit ArmStats(std::size_t arms = 0) : pulls(arms, 0), mean(arms, 0.0) {}
  std::size_t arms() const { return pulls.size(); }
  void record(std::size_t arm, double reward);
  /// Most pulled arm; ties to the lowest index.
  std::size_t most_pulled() const;
};

inline constexpr std::uint64_t kUcbIterationCap = 10'000;

/// Lowest-index unpulled arm, else argmax of mean + c sqrt(ln t / n); ties to the lowest index.
std::size_t ucb_select(const ArmStats& stats, double c);

/// Rate delivered by site g when it plays `chosen` and every other site keeps its
/// configuration in `live`.
double ucb_reward(std::size_t g, const BeamConfig& chosen, const NetworkConfig& live, const LinkModel& links);

/// Single-agent UCB loop against a reward oracle; runs min(steps, cap) pulls.
ArmStats ucb_run(std::size_t arms, std::uint64_t steps, const std::function<double(std::size_t)>& reward,
                 double c, std::uint64_t cap = kUcbIterationCap);

struct UcbOptions {
  double c = 1.4142135623730951;
  std::uint64_t iterations = kUcbIterationCap;
};

/// Independent learners, one per site, pulling simultaneously against the shared network.
/// Each site's reward is normalized by its best standalone candidate rate. Returns the
/// most-pulled candidate per site.
std::vector<std::size_t> ucb_network(std::span<const std::vector<BeamConfig>> candidates, const LinkModel& links,
                                     const UcbOptions& options, std::vector<ArmStats>* stats_out = nullptr);

}  // namespace crabnet
