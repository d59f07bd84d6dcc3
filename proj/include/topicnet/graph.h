#ifndef TOPICNET_GRAPH_H_
#define TOPICNET_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "topicnet/core_model.h"

namespace topicnet {

using CommunityId = std::size_t;

struct Edge {
  TopicId x;
  TopicId y;
  double weight;

  bool operator==(const Edge&) const = default;
};

/// Undirected weighted edges with x < y, all weights strictly above `threshold`.
struct EdgeList {
  std::vector<Edge> edges;
  double threshold = 0.0;
};

struct TopicNode {
  TopicId topic = 0;
  std::string label;
  std::size_t doc_count = 0;
  CommunityId community = 0;

  bool operator==(const TopicNode&) const = default;
};

class TopicGraph {
 public:
  TopicGraph() = default;
  /// Node i must carry topic id i. Throws std::invalid_argument on bad endpoints,
  /// self-loops, duplicate edges or negative weights.
  TopicGraph(std::vector<TopicNode> nodes, EdgeList edges);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.edges.size(); }
  const std::vector<TopicNode>& nodes() const { return nodes_; }
  const TopicNode& node(TopicId id) const { return nodes_[id]; }
  const EdgeList& edge_list() const { return edges_; }
  const std::vector<Edge>& edges() const { return edges_.edges; }

  void set_label(TopicId id, std::string label) { nodes_[id].label = std::move(label); }
  void set_doc_count(TopicId id, std::size_t count) { nodes_[id].doc_count = count; }

  /// |E| / (K(K-1)/2); 0 for fewer than two nodes.
  double density() const;

 private:
  std::vector<TopicNode> nodes_;
  EdgeList edges_;
};

struct Partition {
  std::vector<CommunityId> community_of;
  std::size_t community_count = 0;

  /// Renumbers communities to 0..c-1 in order of their smallest member.
  static Partition canonical(std::vector<CommunityId> labels);
};

/// Weighted modularity. Defined as 0 when the graph has no edge weight.
double modularity(const TopicGraph& graph, const Partition& partition);

struct LouvainOptions {
  std::uint64_t seed = 0;
  /// A pass (or a single move) must improve Q by more than this to count.
  double min_gain = 1e-9;
};

struct LouvainResult {
  Partition partition;
  double modularity = 0.0;
  /// Modularity of the flattened partition after every local-move pass,
  /// starting with the all-singletons value.
  std::vector<double> modularity_trace;
  /// Community of each node at each aggregation level (level 0 maps
  /// original nodes, level i maps level i-1 communities).
  std::vector<std::vector<CommunityId>> levels;
};

/// Louvain modularity optimization with seeded node visit order.
LouvainResult louvain_detailed(const TopicGraph& graph, const LouvainOptions& options);
Partition louvain(const TopicGraph& graph, std::uint64_t seed);

/// Components ordered by smallest member; members ascending.
std::vector<std::vector<TopicId>> connected_components(const TopicGraph& graph);

/// Writes each node's community into the graph.
void apply_partition(TopicGraph& graph, const Partition& partition);

enum class ExportFormat { kGexf, kGraphml, kJson };

/// Throws std::invalid_argument for anything other than gexf, graphml, json.
ExportFormat parse_export_format(std::string_view name);
std::string_view format_extension(ExportFormat format);

std::string export_graph(const TopicGraph& graph, ExportFormat format);
std::string export_graph(const TopicGraph& graph, std::string_view format);

/// Parses a document produced by export_graph back into a graph.
TopicGraph import_graph(std::string_view document, ExportFormat format);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace topicnet

#endif  // TOPICNET_GRAPH_H_
