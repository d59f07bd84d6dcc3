#include "topicnet/graph.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace topicnet {

namespace {

// Adjacency view used by every Louvain pass. self_loop holds the ordered
// double-count of internal weight (A_ii), degree includes it.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total = 0.0;  // 2m

  std::size_t size() const { return adjacency.size(); }
};

WeightedGraph from_topic_graph(const TopicGraph& graph) {
  WeightedGraph g;
  const std::size_t n = graph.num_nodes();
  g.adjacency.resize(n);
  g.self_loop.assign(n, 0.0);
  g.degree.assign(n, 0.0);
  for (const Edge& e : graph.edges()) {
    g.adjacency[e.x].emplace_back(e.y, e.weight);
    g.adjacency[e.y].emplace_back(e.x, e.weight);
    g.degree[e.x] += e.weight;
    g.degree[e.y] += e.weight;
  }
  g.total = std::accumulate(g.degree.begin(), g.degree.end(), 0.0);
  return g;
}

// Collapses `base` by membership (ids 0..count-1).
WeightedGraph aggregate(const WeightedGraph& base, const std::vector<CommunityId>& membership,
                        std::size_t count) {
  WeightedGraph g;
  g.adjacency.resize(count);
  g.self_loop.assign(count, 0.0);
  g.degree.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> links(count);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const CommunityId ci = membership[i];
    g.self_loop[ci] += base.self_loop[i];
    g.degree[ci] += base.degree[i];
    for (auto [j, w] : base.adjacency[i]) {
      const CommunityId cj = membership[j];
      if (ci == cj) {
        g.self_loop[ci] += w;
      } else {
        links[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    g.adjacency[c].assign(links[c].begin(), links[c].end());
  }
  g.total = base.total;
  return g;
}

double modularity_of(const WeightedGraph& g, const std::vector<CommunityId>& membership,
                     std::size_t count) {
  if (g.total <= 0.0) return 0.0;
  std::vector<double> inside(count, 0.0);
  std::vector<double> tot(count, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const CommunityId ci = membership[i];
    tot[ci] += g.degree[i];
    inside[ci] += g.self_loop[i];
    for (auto [j, w] : g.adjacency[i]) {
      if (membership[j] == ci) inside[ci] += w;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const double frac = tot[c] / g.total;
    q += inside[c] / g.total - frac * frac;
  }
  return q;
}

// Minimum modularity improvement for one node move; prevents cycling on
// floating-point ties.
constexpr double kMoveEpsilon = 1e-12;

// Greedy local moves starting from `membership`. Returns true if any node
// moved. Community ids stay within [0, n).
bool local_moves(const WeightedGraph& g, std::vector<CommunityId>& membership,
                 std::mt19937_64& rng) {
  const std::size_t n = g.size();
  if (g.total <= 0.0 || n == 0) return false;
  std::vector<double> tot(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    tot[membership[i]] += g.degree[i];
    ++members[membership[i]];
  }
  std::vector<CommunityId> empty;
  for (std::size_t c = 0; c < n; ++c) {
    if (members[c] == 0) empty.push_back(c);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link_weight(n, 0.0);
  std::vector<CommunityId> touched;
  const double scale = 2.0 / g.total;  // dQ = scale * (gain_new - gain_old)
  bool any_move = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i : order) {
      const CommunityId old_c = membership[i];
      const double ki = g.degree[i];
      for (auto [j, w] : g.adjacency[i]) {
        const CommunityId c = membership[j];
        if (link_weight[c] == 0.0) touched.push_back(c);
        link_weight[c] += w;
      }
      tot[old_c] -= ki;
      --members[old_c];

      auto gain = [&](CommunityId c) { return link_weight[c] - tot[c] * ki / g.total; };
      CommunityId best = old_c;
      double best_gain = gain(old_c);
      for (CommunityId c : touched) {
        if (c == old_c) continue;
        const double candidate = gain(c);
        if (scale * (candidate - best_gain) > kMoveEpsilon) {
          best = c;
          best_gain = candidate;
        }
      }
      // Moving into an empty community has gain 0.
      if (members[old_c] > 0 && scale * (0.0 - best_gain) > kMoveEpsilon && !empty.empty()) {
        best = empty.back();
        best_gain = 0.0;
      }
      // Only leave the old community for a strict improvement over staying.
      if (best != old_c && !(scale * (best_gain - gain(old_c)) > kMoveEpsilon)) best = old_c;

      if (best != old_c) {
        if (members[best] == 0) empty.erase(std::find(empty.begin(), empty.end(), best));
        if (members[old_c] == 0) empty.push_back(old_c);
        moved = true;
        any_move = true;
      }
      membership[i] = best;
      tot[best] += ki;
      ++members[best];

      for (CommunityId c : touched) link_weight[c] = 0.0;
      touched.clear();
    }
  }
  return any_move;
}

// Maps arbitrary ids to 0..c-1 ordered by first appearance.
std::size_t renumber(std::vector<CommunityId>& membership) {
  std::unordered_map<CommunityId, CommunityId> remap;
  for (CommunityId& c : membership) {
    c = remap.try_emplace(c, remap.size()).first->second;
  }
  return remap.size();
}

}  // namespace

TopicGraph::TopicGraph(std::vector<TopicNode> nodes, EdgeList edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].topic != i) throw std::invalid_argument("TopicGraph: node ids must be 0..K-1");
  }
  std::set<std::pair<TopicId, TopicId>> seen;
  for (const Edge& e : edges_.edges) {
    if (e.x >= nodes_.size() || e.y >= nodes_.size()) {
      throw std::invalid_argument("TopicGraph: edge endpoint out of range");
    }
    if (e.x == e.y) throw std::invalid_argument("TopicGraph: self-loop");
    if (!(e.weight >= 0.0)) throw std::invalid_argument("TopicGraph: negative edge weight");
    if (!seen.emplace(std::min(e.x, e.y), std::max(e.x, e.y)).second) {
      throw std::invalid_argument("TopicGraph: duplicate edge");
    }
  }
}

double TopicGraph::density() const {
  const double k = static_cast<double>(nodes_.size());
  if (nodes_.size() < 2) return 0.0;
  return static_cast<double>(edges_.edges.size()) / (k * (k - 1.0) / 2.0);
}

Partition Partition::canonical(std::vector<CommunityId> labels) {
  // First appearance in node order == order of smallest member.
  Partition p;
  p.community_count = renumber(labels);
  p.community_of = std::move(labels);
  return p;
}

double modularity(const TopicGraph& graph, const Partition& partition) {
  if (partition.community_of.size() != graph.num_nodes()) {
    throw std::invalid_argument("modularity: partition does not cover the graph");
  }
  std::size_t count = 0;
  for (CommunityId c : partition.community_of) count = std::max(count, c + 1);
  return modularity_of(from_topic_graph(graph), partition.community_of, count);
}

LouvainResult louvain_detailed(const TopicGraph& graph, const LouvainOptions& options) {
  const WeightedGraph base = from_topic_graph(graph);
  const std::size_t n = base.size();
  std::mt19937_64 rng(options.seed);

  LouvainResult result;
  std::vector<CommunityId> flat(n);
  std::iota(flat.begin(), flat.end(), 0);
  std::size_t count = n;
  double q = modularity_of(base, flat, count);
  result.modularity_trace.push_back(q);

  auto record_pass = [&](double next_q) {
    if (next_q < q - 1e-12) {
      throw std::logic_error("louvain: modularity decreased across a pass");
    }
    q = next_q;
    result.modularity_trace.push_back(q);
  };

  for (;;) {
    // Aggregation passes: collapse by the current partition, move
    // super-nodes starting from singletons.
    for (;;) {
      WeightedGraph level = aggregate(base, flat, count);
      std::vector<CommunityId> membership(count);
      std::iota(membership.begin(), membership.end(), 0);
      if (!local_moves(level, membership, rng)) break;
      const std::size_t next_count = renumber(membership);
      std::vector<CommunityId> next_flat(n);
      for (std::size_t i = 0; i < n; ++i) next_flat[i] = membership[flat[i]];
      const double next_q = modularity_of(base, next_flat, next_count);
      if (next_q - q <= options.min_gain) break;
      record_pass(next_q);
      result.levels.push_back(membership);
      flat = std::move(next_flat);
      count = next_count;
    }

    // Refinement on the original nodes: aggregation can leave single nodes
    // that would gain by moving. Resume aggregation if any did.
    std::vector<CommunityId> refined = flat;
    if (!local_moves(base, refined, rng)) break;
    const std::size_t refined_count = renumber(refined);
    const double refined_q = modularity_of(base, refined, refined_count);
    if (refined_q - q <= options.min_gain) break;
    record_pass(refined_q);
    flat = std::move(refined);
    count = refined_count;
    result.levels.assign(1, flat);
  }

  if (result.levels.empty()) result.levels.push_back(flat);
  result.partition = Partition::canonical(std::move(flat));
  result.modularity = q;
  return result;
}

Partition louvain(const TopicGraph& graph, std::uint64_t seed) {
  return louvain_detailed(graph, LouvainOptions{seed}).partition;
}

std::vector<std::vector<TopicId>> connected_components(const TopicGraph& graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::vector<TopicId>> adjacency(n);
  for (const Edge& e : graph.edges()) {
    adjacency[e.x].push_back(e.y);
    adjacency[e.y].push_back(e.x);
  }
  std::vector<bool> visited(n, false);
  std::vector<std::vector<TopicId>> components;
  for (TopicId start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<TopicId> component{start};
    visited[start] = true;
    for (std::size_t head = 0; head < component.size(); ++head) {
      for (TopicId next : adjacency[component[head]]) {
        if (!visited[next]) {
          visited[next] = true;
          component.push_back(next);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

void apply_partition(TopicGraph& graph, const Partition& partition) {
  if (partition.community_of.size() != graph.num_nodes()) {
    throw std::invalid_argument("apply_partition: size mismatch");
  }
  std::vector<TopicNode> nodes = graph.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].community = partition.community_of[i];
  graph = TopicGraph(std::move(nodes), graph.edge_list());
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "gexf") return ExportFormat::kGexf;
  if (name == "graphml") return ExportFormat::kGraphml;
  if (name == "json") return ExportFormat::kJson;
  throw std::invalid_argument("unknown export format '" + std::string(name) + "'");
}

std::string_view format_extension(ExportFormat format) {
  switch (format) {
    case ExportFormat::kGexf: return "gexf";
    case ExportFormat::kGraphml: return "graphml";
    case ExportFormat::kJson: return "json";
  }
  return "";
}

std::string export_graph(const TopicGraph& graph, std::string_view format) {
  return export_graph(graph, parse_export_format(format));
}

}  // namespace topicnet
