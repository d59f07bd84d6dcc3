#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "oracles.h"
#include "topicnet/graph.h"

using namespace topicnet;

namespace {

TopicGraph make_graph(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<TopicNode> nodes(n);
  for (TopicId i = 0; i < n; ++i) nodes[i].topic = i;
  EdgeList list;
  list.edges = edges;
  return TopicGraph(std::move(nodes), std::move(list));
}

std::vector<Edge> cliques(std::size_t count, std::size_t size) {
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) edges.push_back({c * size + i, c * size + j, 1.0});
    }
  }
  return edges;
}

std::vector<oracle::WeightedEdge> to_oracle(const std::vector<Edge>& edges) {
  std::vector<oracle::WeightedEdge> out;
  for (const Edge& e : edges) out.push_back({e.x, e.y, e.weight});
  return out;
}

std::vector<Edge> random_edges(std::mt19937_64& rng, std::size_t n, double p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  for (TopicId x = 0; x < n; ++x) {
    for (TopicId y = x + 1; y < n; ++y) {
      if (u(rng) < p) edges.push_back({x, y, 0.05 + u(rng)});
    }
  }
  return edges;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("graph construction validates edges") {
  CHECK_THROWS_AS(make_graph(2, {{0, 2, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{1, 1, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{0, 1, 0.5}, {0, 1, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{0, 1, -0.5}}), std::invalid_argument);
  CHECK(make_graph(4, {{0, 1, 0.5}}).density() == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("modularity examples") {
  const auto edges = cliques(4, 5);
  const TopicGraph g = make_graph(20, edges);
  SUBCASE("single community") {
    CHECK(std::abs(modularity(g, Partition::canonical(std::vector<CommunityId>(20, 0)))) < 1e-15);
  }
  SUBCASE("partition by clique") {
    std::vector<CommunityId> labels(20);
    for (TopicId i = 0; i < 20; ++i) labels[i] = i / 5;
    const double q = modularity(g, Partition::canonical(labels));
    CHECK(std::abs(q - 0.75) <= 1e-12);
    CHECK(std::abs(q - oracle::modularity(20, to_oracle(edges), labels)) <= 1e-12);
  }
  SUBCASE("edgeless graph") {
    const TopicGraph empty = make_graph(3, {});
    CHECK(modularity(empty, Partition::canonical({0, 1, 2})) == 0.0);
    CHECK(modularity(empty, Partition::canonical({0, 0, 0})) == 0.0);
  }
}

TEST_CASE("modularity matches the dense oracle on random weighted graphs") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng() % 30;
    const auto edges = random_edges(rng, n, 0.2);
    std::vector<CommunityId> labels(n);
    for (auto& c : labels) c = rng() % 4;
    const Partition p = Partition::canonical(labels);
    CHECK(std::abs(modularity(make_graph(n, edges), p) -
                   oracle::modularity(n, to_oracle(edges), p.community_of)) <= 1e-12);
  }
}

TEST_CASE("canonical partition numbers communities by smallest member") {
  const Partition p = Partition::canonical({7, 3, 7, 9, 3});
  CHECK(p.community_of == std::vector<CommunityId>{0, 1, 0, 2, 1});
  CHECK(p.community_count == 3);
}

TEST_CASE("louvain examples") {
  SUBCASE("edgeless graph keeps singletons") {
    const Partition p = louvain(make_graph(5, {}), 1);
    CHECK(p.community_count == 5);
  }
  SUBCASE("two disjoint triangles") {
    const Partition p = louvain(make_graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}}), 3);
    CHECK(p.community_of == std::vector<CommunityId>{0, 0, 0, 1, 1, 1});
  }
  SUBCASE("four disjoint 5-cliques") {
    for (std::uint64_t seed : {0, 1, 2, 99}) {
      const LouvainResult r = louvain_detailed(make_graph(20, cliques(4, 5)), {seed});
      CHECK(r.partition.community_count == 4);
      CHECK(std::abs(r.modularity - 0.75) <= 1e-9);
      for (TopicId i = 0; i < 20; ++i) CHECK(r.partition.community_of[i] == i / 5);
    }
  }
}

TEST_CASE("louvain is deterministic for a seed and locally optimal") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng() % 80;
    const auto edges = random_edges(rng, n, 0.08);
    const TopicGraph g = make_graph(n, edges);
    const LouvainResult a = louvain_detailed(g, {static_cast<std::uint64_t>(trial)});
    const LouvainResult b = louvain_detailed(g, {static_cast<std::uint64_t>(trial)});
    CHECK(a.partition.community_of == b.partition.community_of);
    CHECK(a.modularity == b.modularity);
    for (std::size_t i = 1; i < a.modularity_trace.size(); ++i) {
      CHECK(a.modularity_trace[i] >= a.modularity_trace[i - 1] - 1e-12);
    }
    CHECK(std::abs(a.modularity - oracle::modularity(n, to_oracle(edges), a.partition.community_of)) <= 1e-9);
    CHECK(oracle::best_single_move_gain(n, to_oracle(edges), a.partition.community_of) <= 1e-9);
  }
}

TEST_CASE("louvain levels compose to the flat partition") {
  std::mt19937_64 rng(5);
  const auto edges = random_edges(rng, 60, 0.1);
  const LouvainResult r = louvain_detailed(make_graph(60, edges), {4});
  REQUIRE_FALSE(r.levels.empty());
  std::vector<CommunityId> flat(60);
  for (TopicId i = 0; i < 60; ++i) {
    CommunityId c = i;
    for (const auto& level : r.levels) c = level[c];
    flat[i] = c;
  }
  CHECK(Partition::canonical(flat).community_of == r.partition.community_of);
}

TEST_CASE("connected components examples") {
  CHECK(connected_components(make_graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}})).size() == 1);
  CHECK(connected_components(make_graph(3, {})).size() == 3);
  const auto cc = connected_components(make_graph(5, {{0, 1, 1}, {2, 3, 1}}));
  CHECK(cc == std::vector<std::vector<TopicId>>{{0, 1}, {2, 3}, {4}});
}

TEST_CASE("components partition the node set") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const TopicGraph g = make_graph(n, random_edges(rng, n, 0.05));
    std::set<TopicId> seen;
    for (const auto& comp : connected_components(g)) {
      for (TopicId t : comp) CHECK(seen.insert(t).second);
    }
    CHECK(seen.size() == n);
    for (const Edge& e : g.edges()) {
      for (const auto& comp : connected_components(g)) {
        const bool has_x = std::find(comp.begin(), comp.end(), e.x) != comp.end();
        const bool has_y = std::find(comp.begin(), comp.end(), e.y) != comp.end();
        CHECK(has_x == has_y);
      }
    }
  }
}

TEST_CASE("export formats") {
  CHECK(parse_export_format("gexf") == ExportFormat::kGexf);
  CHECK(parse_export_format("graphml") == ExportFormat::kGraphml);
  CHECK(parse_export_format("json") == ExportFormat::kJson);
  CHECK_THROWS_AS(parse_export_format("dotx"), std::invalid_argument);
  CHECK_THROWS_AS(export_graph(make_graph(1, {}), "dotx"), std::invalid_argument);
}

TEST_CASE("single node json export carries attributes") {
  TopicGraph g = make_graph(1, {});
  const auto doc = nlohmann::json::parse(export_graph(g, ExportFormat::kJson));
  REQUIRE(doc["nodes"].size() == 1);
  CHECK(doc["nodes"][0].contains("label"));
  CHECK(doc["nodes"][0].contains("doc_count"));
  CHECK(doc["nodes"][0].contains("community"));
  CHECK(doc["links"].empty());
}

TEST_CASE("exports round trip exactly and pass structural schema checks") {
  std::mt19937_64 rng(2);
  std::vector<TopicNode> nodes;
  for (TopicId i = 0; i < 12; ++i) {
    nodes.push_back({i, i % 3 == 0 ? "" : "label <" + std::to_string(i) + "> & \"q\" caf\xc3\xa9",
                     static_cast<std::size_t>(rng() % 1000), static_cast<CommunityId>(i % 4)});
  }
  EdgeList list;
  list.edges = random_edges(rng, 12, 0.3);
  list.edges.push_back({0, 11, 0.1 + 0.2});  // not exactly representable in short decimal
  std::sort(list.edges.begin(), list.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.x, a.y) < std::tie(b.x, b.y);
  });
  list.edges.erase(std::unique(list.edges.begin(), list.edges.end(),
                               [](const Edge& a, const Edge& b) { return a.x == b.x && a.y == b.y; }),
                   list.edges.end());
  const TopicGraph g(nodes, list);

  for (ExportFormat f : {ExportFormat::kGexf, ExportFormat::kGraphml, ExportFormat::kJson}) {
    CAPTURE(format_extension(f));
    const std::string doc = export_graph(g, f);
    const TopicGraph back = import_graph(doc, f);
    CHECK(back.nodes() == g.nodes());
    CHECK(back.edges() == g.edges());
  }
  oracle::ExportedGraph parsed;
  CHECK(oracle::check_gexf(export_graph(g, ExportFormat::kGexf), &parsed) == "");
  CHECK(parsed.nodes.size() == 12);
  CHECK(parsed.edges.size() == g.num_edges());
  CHECK(oracle::check_graphml(export_graph(g, ExportFormat::kGraphml), &parsed) == "");
  CHECK(parsed.nodes.size() == 12);
  CHECK(parsed.nodes["n5"]["doc_count"] == std::to_string(g.node(5).doc_count));
}

TEST_CASE("two-node gexf re-parses to the same node and edge multiset") {
  std::vector<TopicNode> nodes{{0, "a", 3, 0}, {1, "b", 4, 1}};
  EdgeList list;
  list.edges = {{0, 1, 0.625}};
  const TopicGraph g(nodes, list);
  oracle::ExportedGraph parsed;
  REQUIRE(oracle::check_gexf(export_graph(g, ExportFormat::kGexf), &parsed) == "");
  CHECK(parsed.nodes.size() == 2);
  CHECK(parsed.nodes["0"]["label"] == "a");
  CHECK(parsed.nodes["1"]["doc_count"] == "4");
  REQUIRE(parsed.edges.size() == 1);
  CHECK(std::get<0>(parsed.edges[0]) == "0");
  CHECK(std::get<1>(parsed.edges[0]) == "1");
  CHECK(std::stod(std::get<2>(parsed.edges[0])) == 0.625);
}

TEST_CASE("the structural checks reject broken documents") {
  const TopicGraph g = make_graph(2, {{0, 1, 0.5}});
  std::string gexf = export_graph(g, ExportFormat::kGexf);
  gexf.replace(gexf.find("target=\"1\""), 10, "target=\"7\"");
  CHECK(oracle::check_gexf(gexf) != "");
  std::string graphml = export_graph(g, ExportFormat::kGraphml);
  graphml.replace(graphml.find("key=\"d1\""), 8, "key=\"d9\"");
  CHECK(oracle::check_graphml(graphml) != "");
  CHECK(oracle::check_gexf("<gexf>") != "");
}

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
}

}  // TEST_SUITE
