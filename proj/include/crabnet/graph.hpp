#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crabnet/scenario.hpp"

namespace crabnet {

enum class Criterion { distance, los, coverage };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);
/// 1/400 m for distance, 0 for LoS, 0.15 for coverage.
double default_threshold(Criterion c);

/// Undirected weighted edge between site indices, a < b.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class InteractionGraph {
 public:
  InteractionGraph() = default;
  InteractionGraph(std::size_t nodes, std::vector<Edge> edges, Criterion criterion = Criterion::coverage,
                   double threshold = 0.0);

  std::size_t node_count() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Criterion criterion() const { return criterion_; }
  double threshold() const { return threshold_; }

  const std::vector<std::size_t>& neighbors(std::size_t node) const { return adjacency_.at(node); }
  std::optional<std::size_t> edge_index(std::size_t a, std::size_t b) const;
  std::size_t component_count() const;
  bool is_forest() const { return edges_.size() + component_count() == nodes_; }
  double mean_degree() const;

  /// Copy without edge `index`.
  InteractionGraph without_edge(std::size_t index) const;

 private:
  void rebuild_adjacency();

  std::size_t nodes_ = 0;
  std::vector<Edge> edges_;
  Criterion criterion_ = Criterion::coverage;
  double threshold_ = 0.0;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Inputs shared by all connectivity criteria. `coverage[i]` is the set of occupied zones
/// site i can reach with any of its candidate beams (sorted).
struct ConnectivityInputs {
  const Scenario& scenario;
  std::span<const std::vector<ZoneId>> coverage;
};

/// distance: 1/d; los: 1 or 0; coverage: |A n B| / |A u B| over occupied coverage sets.
double connectivity_score(std::size_t a, std::size_t b, Criterion criterion, const ConnectivityInputs& in);

/// Edge between every pair whose score strictly exceeds c_thr.
InteractionGraph build_graph(Criterion criterion, double c_thr, const ConnectivityInputs& in);

/// Index of the lightest edge whose removal keeps its component connected; ties go to
/// the lowest (a, b). Empty when the graph is already a forest.
std::optional<std::size_t> removable_edge(const InteractionGraph& graph);

/// One reverse-delete step. Empty ("already a forest") when no edge is removable.
std::optional<InteractionGraph> prune_once(const InteractionGraph& graph);

/// Edge list "g_id,h_id,weight" using site ids.
void write_edge_list(const InteractionGraph& graph, const Scenario& scenario, std::ostream& out);

}  // namespace crabnet
