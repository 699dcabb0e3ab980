#include "crabnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <tuple>
#include <iomanip>
#include <ostream>

#include "crabnet/error.hpp"

namespace crabnet {

Criterion parse_criterion(const std::string& name) {
  if (name == "distance") return Criterion::distance;
  if (name == "los") return Criterion::los;
  if (name == "coverage") return Criterion::coverage;
  throw DomainError("unknown connectivity criterion '" + name + "'");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::distance: return "distance";
    case Criterion::los: return "los";
    case Criterion::coverage: return "coverage";
  }
  return "?";
}

double default_threshold(Criterion c) {
  switch (c) {
    case Criterion::distance: return 1.0 / 400.0;
    case Criterion::los: return 0.0;
    case Criterion::coverage: return 0.15;
  }
  return 0.0;
}

InteractionGraph::InteractionGraph(std::size_t nodes, std::vector<Edge> edges, Criterion criterion, double threshold)
    : nodes_(nodes), edges_(std::move(edges)), criterion_(criterion), threshold_(threshold) {
  for (Edge& e : edges_) {
    if (e.a == e.b) throw ValidationError("interaction graph: self edge");
    if (e.a >= nodes_ || e.b >= nodes_) throw ValidationError("interaction graph: node out of range");
    if (!std::isfinite(e.weight) || e.weight < 0.0) throw ValidationError("interaction graph: bad weight");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b)
      throw ValidationError("interaction graph: duplicate edge");
  rebuild_adjacency();
}

void InteractionGraph::rebuild_adjacency() {
  adjacency_.assign(nodes_, {});
  for (const Edge& e : edges_) {
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::optional<std::size_t> InteractionGraph::edge_index(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(a, b),
                             [](const Edge& e, const std::pair<std::size_t, std::size_t>& k) {
                               return std::tie(e.a, e.b) < std::tie(k.first, k.second);
                             });
  if (it == edges_.end() || it->a != a || it->b != b) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::size_t InteractionGraph::component_count() const {
  DisjointSets ds(nodes_);
  std::size_t components = nodes_;
  for (const Edge& e : edges_)
    if (ds.unite(e.a, e.b)) --components;
  return components;
}

double InteractionGraph::mean_degree() const {
  return nodes_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(nodes_);
}

InteractionGraph InteractionGraph::without_edge(std::size_t index) const {
  InteractionGraph g = *this;
  g.edges_.erase(g.edges_.begin() + static_cast<std::ptrdiff_t>(index));
  g.rebuild_adjacency();
  return g;
}

double connectivity_score(std::size_t a, std::size_t b, Criterion criterion, const ConnectivityInputs& in) {
  if (a == b) throw DomainError("connectivity_score: identical nodes");
  switch (criterion) {
    case Criterion::distance: {
      const double d = distance(in.scenario.site(a).position, in.scenario.site(b).position);
      if (d <= 0.0) throw DomainError("connectivity_score: co-located sites");
      return 1.0 / d;
    }
    case Criterion::los:
      return in.scenario.site_los(a, b) ? 1.0 : 0.0;
    case Criterion::coverage: {
      const auto& ca = in.coverage[a];
      const auto& cb = in.coverage[b];
      std::vector<ZoneId> inter;
      std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(inter));
      const std::size_t uni = ca.size() + cb.size() - inter.size();
      return uni == 0 ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
    }
  }
  return 0.0;
}

InteractionGraph build_graph(Criterion criterion, double c_thr, const ConnectivityInputs& in) {
  if (!(c_thr >= 0.0)) throw DomainError("build_graph: threshold must be >= 0");
  const std::size_t n = in.scenario.sites().size();
  if (criterion == Criterion::coverage && in.coverage.size() != n)
    throw DomainError("build_graph: coverage sets missing");
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double s = connectivity_score(a, b, criterion, in);
      if (s > c_thr) edges.push_back({a, b, s});
    }
  return InteractionGraph(n, std::move(edges), criterion, c_thr);
}

std::optional<std::size_t> removable_edge(const InteractionGraph& graph) {
  if (graph.is_forest()) return std::nullopt;
  std::vector<std::size_t> order(graph.edges().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& edges = graph.edges();
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (edges[x].weight != edges[y].weight) return edges[x].weight < edges[y].weight;
    return std::tie(edges[x].a, edges[x].b) < std::tie(edges[y].a, edges[y].b);
  });
  for (std::size_t idx : order) {
    // Removable iff the endpoints stay connected through the remaining edges.
    DisjointSets ds(graph.node_count());
    for (std::size_t j = 0; j < edges.size(); ++j)
      if (j != idx) ds.unite(edges[j].a, edges[j].b);
    if (ds.find(edges[idx].a) == ds.find(edges[idx].b)) return idx;
  }
  return std::nullopt;
}

std::optional<InteractionGraph> prune_once(const InteractionGraph& graph) {
  const auto idx = removable_edge(graph);
  if (!idx) return std::nullopt;
  return graph.without_edge(*idx);
}

void write_edge_list(const InteractionGraph& graph, const Scenario& scenario, std::ostream& out) {
  out << "g_id,h_id,weight\n";
  out << std::setprecision(10);
  for (const Edge& e : graph.edges())
    out << scenario.site(e.a).id << ',' << scenario.site(e.b).id << ',' << e.weight << '\n';
}

}  // namespace crabnet
