#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "crabnet/beam_config.hpp"
#include "crabnet/crab.hpp"
#include "crabnet/graph.hpp"

namespace crabnet::oracle {

inline constexpr std::uint64_t kDefaultCap = 1'000'000;

struct BestConfig {
  NetworkConfig config;
  std::vector<std::size_t> indices;
  double rate = 0.0;
};

/// Number of tuples in the product of the given domain sizes (as double, never overflows).
double product_size(std::span<const std::size_t> domains);

/// Argmax of `rate` over the product of candidate lists. Ties keep the lexicographically
/// smallest index tuple. Throws CapacityError when the product exceeds `cap`.
BestConfig exhaustive_best(std::span<const std::vector<BeamConfig>> candidates,
                           const std::function<double(const NetworkConfig&)>& rate,
                           std::uint64_t cap = kDefaultCap);

/// Exact marginals of p(B) proportional to the product of chi over graph edges, by
/// enumeration. Throws DegeneracyError on a zero partition function.
std::vector<std::vector<double>> exact_marginals(const InteractionGraph& graph, const TableSet& tables,
                                                 std::span<const std::size_t> domains,
                                                 std::uint64_t cap = kDefaultCap);

}  // namespace crabnet::oracle
