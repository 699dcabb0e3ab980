#include "crabnet/oracle.hpp"

#include <cmath>
#include <string>

#include "crabnet/error.hpp"

namespace crabnet::oracle {

double product_size(std::span<const std::size_t> domains) {
  double n = 1.0;
  for (std::size_t d : domains) n *= static_cast<double>(d);
  return n;
}

namespace {

void check_cap(std::span<const std::size_t> domains, std::uint64_t cap) {
  const double size = product_size(domains);
  if (size > static_cast<double>(cap))
    throw CapacityError("search space of " + std::to_string(static_cast<long double>(size)) +
                            " tuples exceeds cap " + std::to_string(cap),
                        size);
}

// Odometer increment, last index fastest. False after the final tuple.
bool next_tuple(std::vector<std::size_t>& idx, std::span<const std::size_t> domains) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < domains[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

BestConfig exhaustive_best(std::span<const std::vector<BeamConfig>> candidates,
                           const std::function<double(const NetworkConfig&)>& rate, std::uint64_t cap) {
  std::vector<std::size_t> domains;
  for (const auto& c : candidates) {
    if (c.empty()) throw ValidationError("empty candidate list");
    domains.push_back(c.size());
  }
  check_cap(domains, cap);

  BestConfig best;
  std::vector<std::size_t> idx(domains.size(), 0);
  NetworkConfig cfg{std::vector<BeamConfig>(domains.size())};
  bool first = true;
  do {
    for (std::size_t g = 0; g < idx.size(); ++g) cfg.configs[g] = candidates[g][idx[g]];
    const double t = rate(cfg);
    if (first || t > best.rate) {
      best.rate = t;
      best.indices = idx;
      best.config = cfg;
      first = false;
    }
  } while (next_tuple(idx, domains));
  return best;
}

std::vector<std::vector<double>> exact_marginals(const InteractionGraph& graph, const TableSet& tables,
                                                 std::span<const std::size_t> domains, std::uint64_t cap) {
  if (domains.size() != graph.node_count()) throw ValidationError("one domain size per node required");
  for (std::size_t d : domains)
    if (d == 0) throw ValidationError("empty candidate list");
  check_cap(domains, cap);

  std::vector<const CompatibilityTable*> chi;
  for (const Edge& e : graph.edges()) {
    auto it = tables.find({e.a, e.b});
    if (it == tables.end()) throw ValidationError("missing compatibility table");
    chi.push_back(&it->second);
  }

  std::vector<std::vector<double>> mass(domains.size());
  for (std::size_t g = 0; g < domains.size(); ++g) mass[g].assign(domains[g], 0.0);
  double z = 0.0;
  std::vector<std::size_t> idx(domains.size(), 0);
  do {
    double p = 1.0;
    for (std::size_t e = 0; e < chi.size() && p != 0.0; ++e) {
      const Edge& ed = graph.edges()[e];
      p *= (*chi[e])(idx[ed.a], idx[ed.b]);
    }
    if (p == 0.0) continue;
    z += p;
    for (std::size_t g = 0; g < idx.size(); ++g) mass[g][idx[g]] += p;
  } while (next_tuple(idx, domains));

  if (!(z > 0.0) || !std::isfinite(z)) throw DegeneracyError("partition function is zero");
  for (auto& m : mass)
    for (double& v : m) v /= z;
  return mass;
}

}  // namespace crabnet::oracle
