#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "crabnet/beam_config.hpp"
#include "crabnet/graph.hpp"
#include "crabnet/rate_model.hpp"
#include "crabnet/rng.hpp"

namespace crabnet {

/// Nonnegative |F_a| x |F_b| matrix for an edge (a, b), a < b; rows index F_a.
class CompatibilityTable {
 public:
  CompatibilityTable() = default;
  CompatibilityTable(std::size_t rows, std::size_t cols, double fill = 0.0);
  CompatibilityTable(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  const std::vector<double>& values() const { return values_; }
  bool all_zero() const;
  CompatibilityTable scaled(double factor) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

using EdgeKey = std::pair<std::size_t, std::size_t>;
/// One table per graph edge, keyed by (a, b) with a < b.
using TableSet = std::map<EdgeKey, CompatibilityTable>;

/// Network rate when only g and h transmit, with b_g and b_h.
double compatibility(std::size_t g, std::size_t h, const BeamConfig& bg, const BeamConfig& bh,
                     const LinkModel& links);

/// chi^{(g,h)} over the two candidate lists; g < h.
CompatibilityTable compatibility_table(std::size_t g, std::size_t h, std::span<const BeamConfig> fg,
                                       std::span<const BeamConfig> fh, const LinkModel& links);

/// Directed messages, two per edge: messages[2e] is a->b (over F_b), messages[2e+1] is b->a
/// (over F_a), for edge e = (a, b) of the graph the state was built for.
struct BeliefState {
  std::vector<std::vector<double>> messages;
  std::vector<bool> converged;
  int iteration = 0;
};

/// Messages drawn uniformly in (0, 1) and normalized.
BeliefState random_state(const InteractionGraph& graph, std::span<const std::size_t> domains, Rng& rng);
BeliefState uniform_state(const InteractionGraph& graph, std::span<const std::size_t> domains);

/// One synchronous update of every directed message from the previous round's messages,
/// each normalized to sum 1. Converged nodes re-emit their previous messages.
/// Throws DegeneracyError when a message has zero mass.
BeliefState bp_round(const BeliefState& state, const TableSet& tables, const InteractionGraph& graph,
                     std::span<const std::size_t> domains);

/// Per node: max entrywise change over its outgoing messages is below tol_factor times the
/// smallest entry of its newest outgoing messages (an unchanged node always qualifies).
std::vector<bool> node_convergence(const BeliefState& prev, const BeliefState& curr,
                                   const InteractionGraph& graph, double tol_factor);
bool has_converged(const BeliefState& prev, const BeliefState& curr, const InteractionGraph& graph,
                   double tol_factor);

/// pi_g proportional to the product of incoming messages; isolated nodes are uniform.
std::vector<std::vector<double>> marginals(const BeliefState& state, const InteractionGraph& graph,
                                           std::span<const std::size_t> domains);

struct CrabOptions {
  int max_iters = 50;
  double tol_factor = 1e-5;
};

struct CrabDiagnostics {
  std::vector<int> iterations;  // rounds per attempt
  int prunes = 0;
  bool converged = false;
  std::vector<Edge> pruned;
};

struct CrabResult {
  std::vector<std::vector<double>> marginals;
  InteractionGraph graph;  // after pruning
  CrabDiagnostics diagnostics;
};

/// Belief propagation with reverse-delete pruning: run up to max_iters rounds from fresh
/// random messages; when that fails, drop the lightest removable edge and restart.
CrabResult run_crab(const InteractionGraph& graph, const TableSet& tables, std::span<const std::size_t> domains,
                    const CrabOptions& options, Rng& rng);

/// Index drawn from the categorical distribution pi.
std::size_t sample_config(std::span<const double> pi, Rng& rng);

/// Shannon entropy in bits.
double entropy(std::span<const double> pi);

}  // namespace crabnet
