#include "crabnet/crab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "crabnet/error.hpp"

namespace crabnet {

CompatibilityTable::CompatibilityTable(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

CompatibilityTable::CompatibilityTable(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw ValidationError("compatibility table size mismatch");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("compatibility entries must be finite and >= 0");
}

bool CompatibilityTable::all_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

CompatibilityTable CompatibilityTable::scaled(double factor) const {
  CompatibilityTable out = *this;
  for (double& v : out.values_) v *= factor;
  return out;
}

double compatibility(std::size_t g, std::size_t h, const BeamConfig& bg, const BeamConfig& bh,
                     const LinkModel& links) {
  NetworkConfig cfg = NetworkConfig::silent(links.scenario().sites().size());
  cfg.configs.at(g) = bg;
  cfg.configs.at(h) = bh;
  return network_rate(cfg, links);
}

CompatibilityTable compatibility_table(std::size_t g, std::size_t h, std::span<const BeamConfig> fg,
                                       std::span<const BeamConfig> fh, const LinkModel& links) {
  if (g >= h) throw ValidationError("compatibility table requires g < h");
  CompatibilityTable t(fg.size(), fh.size());
  for (std::size_t x = 0; x < fg.size(); ++x)
    for (std::size_t y = 0; y < fh.size(); ++y) t(x, y) = compatibility(g, h, fg[x], fh[y], links);
  return t;
}

namespace {

void check_domains(const InteractionGraph& graph, std::span<const std::size_t> domains) {
  if (domains.size() != graph.node_count()) throw ValidationError("one domain size per node required");
  for (std::size_t d : domains)
    if (d == 0) throw ValidationError("empty candidate list");
}

void normalize(std::vector<double>& m, std::size_t from, std::size_t to) {
  double sum = 0.0;
  for (double v : m) sum += v;
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw DegeneracyError("message " + std::to_string(from) + "->" + std::to_string(to) + " has zero mass");
  for (double& v : m) v /= sum;
}

// Slot of the message sender -> receiver along edge e.
std::size_t slot(const Edge& e, std::size_t sender) { return sender == e.a ? 0 : 1; }

const std::vector<double>& incoming(const BeliefState& s, const InteractionGraph& graph, std::size_t from,
                                    std::size_t to) {
  std::size_t e = *graph.edge_index(from, to);
  return s.messages[2 * e + slot(graph.edges()[e], from)];
}

const CompatibilityTable& table_for(const TableSet& tables, const Edge& e) {
  auto it = tables.find({e.a, e.b});
  if (it == tables.end())
    throw ValidationError("missing compatibility table for edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
  return it->second;
}

}  // namespace

BeliefState random_state(const InteractionGraph& graph, std::span<const std::size_t> domains, Rng& rng) {
  check_domains(graph, domains);
  std::uniform_real_distribution<double> u(std::numeric_limits<double>::min(), 1.0);
  BeliefState s;
  for (const Edge& e : graph.edges()) {
    std::vector<double> ab(domains[e.b]), ba(domains[e.a]);
    for (double& v : ab) v = u(rng);
    for (double& v : ba) v = u(rng);
    normalize(ab, e.a, e.b);
    normalize(ba, e.b, e.a);
    s.messages.push_back(std::move(ab));
    s.messages.push_back(std::move(ba));
  }
  s.converged.assign(graph.node_count(), false);
  return s;
}

BeliefState uniform_state(const InteractionGraph& graph, std::span<const std::size_t> domains) {
  check_domains(graph, domains);
  BeliefState s;
  for (const Edge& e : graph.edges()) {
    s.messages.emplace_back(domains[e.b], 1.0 / static_cast<double>(domains[e.b]));
    s.messages.emplace_back(domains[e.a], 1.0 / static_cast<double>(domains[e.a]));
  }
  s.converged.assign(graph.node_count(), false);
  return s;
}

BeliefState bp_round(const BeliefState& state, const TableSet& tables, const InteractionGraph& graph,
                     std::span<const std::size_t> domains) {
  check_domains(graph, domains);
  if (state.messages.size() != 2 * graph.edges().size()) throw ValidationError("belief state does not match graph");
  BeliefState next = state;
  next.iteration = state.iteration + 1;
  if (next.converged.size() != graph.node_count()) next.converged.assign(graph.node_count(), false);

  for (std::size_t g = 0; g < graph.node_count(); ++g) {
    if (next.converged[g]) continue;
    const auto& nbrs = graph.neighbors(g);
    for (std::size_t h : nbrs) {
      std::size_t ei = *graph.edge_index(g, h);
      const Edge& e = graph.edges()[ei];
      const CompatibilityTable& chi = table_for(tables, e);
      const bool g_is_row = (g == e.a);
      if (chi.rows() != domains[e.a] || chi.cols() != domains[e.b])
        throw ValidationError("compatibility table shape does not match candidate lists");

      std::vector<double> prod(domains[g], 1.0);
      for (std::size_t k : nbrs) {
        if (k == h) continue;
        const auto& m = incoming(state, graph, k, g);
        for (std::size_t x = 0; x < prod.size(); ++x) prod[x] *= m[x];
      }
      std::vector<double> out(domains[h], 0.0);
      for (std::size_t x = 0; x < prod.size(); ++x) {
        if (prod[x] == 0.0) continue;
        for (std::size_t y = 0; y < out.size(); ++y)
          out[y] += (g_is_row ? chi(x, y) : chi(y, x)) * prod[x];
      }
      normalize(out, g, h);
      next.messages[2 * ei + slot(e, g)] = std::move(out);
    }
  }
  return next;
}

std::vector<bool> node_convergence(const BeliefState& prev, const BeliefState& curr,
                                   const InteractionGraph& graph, double tol_factor) {
  std::vector<bool> done(graph.node_count(), true);
  for (std::size_t g = 0; g < graph.node_count(); ++g) {
    double change = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t h : graph.neighbors(g)) {
      std::size_t ei = *graph.edge_index(g, h);
      std::size_t idx = 2 * ei + slot(graph.edges()[ei], g);
      const auto& a = prev.messages[idx];
      const auto& b = curr.messages[idx];
      for (std::size_t y = 0; y < b.size(); ++y) {
        change = std::max(change, std::abs(b[y] - a[y]));
        smallest = std::min(smallest, b[y]);
      }
    }
    done[g] = change == 0.0 || change < tol_factor * smallest;
  }
  return done;
}

bool has_converged(const BeliefState& prev, const BeliefState& curr, const InteractionGraph& graph,
                   double tol_factor) {
  auto flags = node_convergence(prev, curr, graph, tol_factor);
  return std::all_of(flags.begin(), flags.end(), [](bool b) { return b; });
}

std::vector<std::vector<double>> marginals(const BeliefState& state, const InteractionGraph& graph,
                                           std::span<const std::size_t> domains) {
  check_domains(graph, domains);
  std::vector<std::vector<double>> pi(graph.node_count());
  for (std::size_t g = 0; g < graph.node_count(); ++g) {
    pi[g].assign(domains[g], 1.0);
    for (std::size_t h : graph.neighbors(g)) {
      const auto& m = incoming(state, graph, h, g);
      for (std::size_t x = 0; x < domains[g]; ++x) pi[g][x] *= m[x];
    }
    double sum = 0.0;
    for (double v : pi[g]) sum += v;
    if (!(sum > 0.0) || !std::isfinite(sum))
      throw DegeneracyError("marginal of node " + std::to_string(g) + " has zero mass");
    for (double& v : pi[g]) v /= sum;
  }
  return pi;
}

CrabResult run_crab(const InteractionGraph& graph, const TableSet& tables, std::span<const std::size_t> domains,
                    const CrabOptions& options, Rng& rng) {
  if (options.max_iters < 1) throw ValidationError("max_iters must be positive");
  CrabResult result;
  result.graph = graph;
  for (;;) {
    BeliefState state = random_state(result.graph, domains, rng);
    int rounds = 0;
    bool ok = false;
    while (rounds < options.max_iters) {
      BeliefState next = bp_round(state, tables, result.graph, domains);
      ++rounds;
      auto flags = node_convergence(state, next, result.graph, options.tol_factor);
      for (std::size_t g = 0; g < flags.size(); ++g) next.converged[g] = next.converged[g] || flags[g];
      state = std::move(next);
      if (std::all_of(state.converged.begin(), state.converged.end(), [](bool b) { return b; })) {
        ok = true;
        break;
      }
    }
    result.diagnostics.iterations.push_back(rounds);
    if (ok) {
      result.diagnostics.converged = true;
      result.marginals = marginals(state, result.graph, domains);
      return result;
    }
    auto idx = removable_edge(result.graph);
    if (!idx) {
      // A forest that did not settle within the budget: report the last beliefs.
      result.marginals = marginals(state, result.graph, domains);
      return result;
    }
    result.diagnostics.pruned.push_back(result.graph.edges()[*idx]);
    result.graph = result.graph.without_edge(*idx);
    ++result.diagnostics.prunes;
  }
}

std::size_t sample_config(std::span<const double> pi, Rng& rng) {
  if (pi.empty()) throw ValidationError("empty distribution");
  double total = 0.0;
  for (double p : pi) {
    if (!(p >= 0.0)) throw ValidationError("negative probability");
    total += p;
  }
  if (!(total > 0.0)) throw DegeneracyError("distribution has zero mass");
  std::uniform_real_distribution<double> u(0.0, total);
  double r = u(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    acc += pi[i];
    if (r < acc && pi[i] > 0.0) return i;
  }
  for (std::size_t i = pi.size(); i-- > 0;)
    if (pi[i] > 0.0) return i;
  return 0;
}

double entropy(std::span<const double> pi) {
  double h = 0.0;
  for (double p : pi)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

}  // namespace crabnet
