// GEXF 1.2, GraphML and node-link JSON writers plus the matching readers.

#include <charconv>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "topicnet/graph.h"

namespace topicnet {

namespace {

namespace pt = boost::property_tree;
using nlohmann::json;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string write_gexf(const TopicGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://www.gexf.net/1.2draft "
         "http://www.gexf.net/1.2draft/gexf.xsd\" version=\"1.2\">\n"
      << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"0\" title=\"label\" type=\"string\"/>\n"
      << "      <attribute id=\"1\" title=\"doc_count\" type=\"integer\"/>\n"
      << "      <attribute id=\"2\" title=\"community\" type=\"integer\"/>\n"
      << "    </attributes>\n"
      << "    <attributes class=\"edge\">\n"
      << "      <attribute id=\"0\" title=\"weight\" type=\"double\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (const TopicNode& node : graph.nodes()) {
    const std::string label = xml_escape(node.label);
    out << "      <node id=\"" << node.topic << "\" label=\"" << label << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"0\" value=\"" << label << "\"/>\n"
        << "          <attvalue for=\"1\" value=\"" << node.doc_count << "\"/>\n"
        << "          <attvalue for=\"2\" value=\"" << node.community << "\"/>\n"
        << "        </attvalues>\n"
        << "      </node>\n";
  }
  out << "    </nodes>\n"
      << "    <edges>\n";
  std::size_t id = 0;
  for (const Edge& e : graph.edges()) {
    const std::string w = format_double(e.weight);
    out << "      <edge id=\"" << id++ << "\" source=\"" << e.x << "\" target=\"" << e.y
        << "\" weight=\"" << w << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"0\" value=\"" << w << "\"/>\n"
        << "        </attvalues>\n"
        << "      </edge>\n";
  }
  out << "    </edges>\n"
      << "  </graph>\n"
      << "</gexf>\n";
  return out.str();
}

std::string write_graphml(const TopicGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
      << "  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"d1\" for=\"node\" attr.name=\"doc_count\" attr.type=\"long\"/>\n"
      << "  <key id=\"d2\" for=\"node\" attr.name=\"community\" attr.type=\"long\"/>\n"
      << "  <key id=\"d3\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (const TopicNode& node : graph.nodes()) {
    out << "    <node id=\"n" << node.topic << "\">\n"
        << "      <data key=\"d0\">" << xml_escape(node.label) << "</data>\n"
        << "      <data key=\"d1\">" << node.doc_count << "</data>\n"
        << "      <data key=\"d2\">" << node.community << "</data>\n"
        << "    </node>\n";
  }
  std::size_t id = 0;
  for (const Edge& e : graph.edges()) {
    out << "    <edge id=\"e" << id++ << "\" source=\"n" << e.x << "\" target=\"n" << e.y
        << "\">\n"
        << "      <data key=\"d3\">" << format_double(e.weight) << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n"
      << "</graphml>\n";
  return out.str();
}

std::string write_json(const TopicGraph& graph) {
  json nodes = json::array();
  for (const TopicNode& node : graph.nodes()) {
    nodes.push_back({{"id", node.topic},
                     {"label", node.label},
                     {"doc_count", node.doc_count},
                     {"community", node.community}});
  }
  json links = json::array();
  for (const Edge& e : graph.edges()) {
    links.push_back({{"source", e.x}, {"target", e.y}, {"weight", e.weight}});
  }
  json doc = {{"directed", false},
              {"multigraph", false},
              {"graph", json::object()},
              {"nodes", std::move(nodes)},
              {"links", std::move(links)}};
  return doc.dump(2) + "\n";
}

template <typename T>
T parse_value(std::string_view s, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("import_graph: bad " + std::string(what) + " '" +
                             std::string(s) + "'");
  }
  return value;
}

std::size_t parse_node_ref(std::string_view s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) {
    throw std::runtime_error("import_graph: bad node id '" + std::string(s) + "'");
  }
  return parse_value<std::size_t>(s.substr(prefix.size()), "node id");
}

pt::ptree read_xml(std::string_view document) {
  std::istringstream in{std::string(document)};
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

TopicGraph finish(std::vector<TopicNode> nodes, std::vector<Edge> edges) {
  std::sort(nodes.begin(), nodes.end(),
            [](const TopicNode& a, const TopicNode& b) { return a.topic < b.topic; });
  EdgeList list;
  list.edges = std::move(edges);
  return TopicGraph(std::move(nodes), std::move(list));
}

TopicGraph read_gexf(std::string_view document) {
  pt::ptree tree = read_xml(document);
  const pt::ptree& graph = tree.get_child("gexf.graph");
  std::map<std::string, std::string> node_attr;  // attribute id -> title
  for (const auto& [tag, child] : graph) {
    if (tag != "attributes" || child.get<std::string>("<xmlattr>.class") != "node") continue;
    for (const auto& [attr_tag, attr] : child) {
      if (attr_tag != "attribute") continue;
      node_attr[attr.get<std::string>("<xmlattr>.id")] = attr.get<std::string>("<xmlattr>.title");
    }
  }
  std::vector<TopicNode> nodes;
  for (const auto& [tag, node] : graph.get_child("nodes")) {
    if (tag != "node") continue;
    TopicNode out;
    out.topic = parse_value<std::size_t>(node.get<std::string>("<xmlattr>.id"), "node id");
    out.label = node.get<std::string>("<xmlattr>.label", "");
    for (const auto& [vtag, value] : node.get_child("attvalues")) {
      if (vtag != "attvalue") continue;
      const std::string& title = node_attr[value.get<std::string>("<xmlattr>.for")];
      const std::string v = value.get<std::string>("<xmlattr>.value");
      if (title == "label") out.label = v;
      if (title == "doc_count") out.doc_count = parse_value<std::size_t>(v, "doc_count");
      if (title == "community") out.community = parse_value<std::size_t>(v, "community");
    }
    nodes.push_back(std::move(out));
  }
  std::vector<Edge> edges;
  if (auto edge_tree = graph.get_child_optional("edges")) {
    for (const auto& [tag, edge] : *edge_tree) {
      if (tag != "edge") continue;
      edges.push_back({parse_value<std::size_t>(edge.get<std::string>("<xmlattr>.source"), "source"),
                       parse_value<std::size_t>(edge.get<std::string>("<xmlattr>.target"), "target"),
                       parse_value<double>(edge.get<std::string>("<xmlattr>.weight", "1"), "weight")});
    }
  }
  return finish(std::move(nodes), std::move(edges));
}

TopicGraph read_graphml(std::string_view document) {
  pt::ptree tree = read_xml(document);
  const pt::ptree& root = tree.get_child("graphml");
  std::map<std::string, std::string> keys;  // key id -> attr.name
  for (const auto& [tag, key] : root) {
    if (tag == "key") keys[key.get<std::string>("<xmlattr>.id")] = key.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'));
  }
  std::vector<TopicNode> nodes;
  std::vector<Edge> edges;
  for (const auto& [tag, item] : root.get_child("graph")) {
    if (tag == "node") {
      TopicNode out;
      out.topic = parse_node_ref(item.get<std::string>("<xmlattr>.id"), "n");
      for (const auto& [dtag, data] : item) {
        if (dtag != "data") continue;
        const std::string& name = keys[data.get<std::string>("<xmlattr>.key")];
        const std::string v = data.get_value<std::string>();
        if (name == "label") out.label = v;
        if (name == "doc_count") out.doc_count = parse_value<std::size_t>(v, "doc_count");
        if (name == "community") out.community = parse_value<std::size_t>(v, "community");
      }
      nodes.push_back(std::move(out));
    } else if (tag == "edge") {
      Edge e{parse_node_ref(item.get<std::string>("<xmlattr>.source"), "n"),
             parse_node_ref(item.get<std::string>("<xmlattr>.target"), "n"), 1.0};
      for (const auto& [dtag, data] : item) {
        if (dtag == "data" && keys[data.get<std::string>("<xmlattr>.key")] == "weight") {
          e.weight = parse_value<double>(data.get_value<std::string>(), "weight");
        }
      }
      edges.push_back(e);
    }
  }
  return finish(std::move(nodes), std::move(edges));
}

TopicGraph read_json(std::string_view document) {
  json doc = json::parse(document);
  std::vector<TopicNode> nodes;
  for (const json& node : doc.at("nodes")) {
    nodes.push_back({node.at("id").get<std::size_t>(), node.at("label").get<std::string>(),
                     node.at("doc_count").get<std::size_t>(),
                     node.at("community").get<std::size_t>()});
  }
  std::vector<Edge> edges;
  for (const json& link : doc.at("links")) {
    edges.push_back({link.at("source").get<std::size_t>(), link.at("target").get<std::size_t>(),
                     link.at("weight").get<double>()});
  }
  return finish(std::move(nodes), std::move(edges));
}

}  // namespace

std::string export_graph(const TopicGraph& graph, ExportFormat format) {
  switch (format) {
    case ExportFormat::kGexf: return write_gexf(graph);
    case ExportFormat::kGraphml: return write_graphml(graph);
    case ExportFormat::kJson: return write_json(graph);
  }
  throw std::invalid_argument("export_graph: unknown format");
}

TopicGraph import_graph(std::string_view document, ExportFormat format) {
  switch (format) {
    case ExportFormat::kGexf: return read_gexf(document);
    case ExportFormat::kGraphml: return read_graphml(document);
    case ExportFormat::kJson: return read_json(document);
  }
  throw std::invalid_argument("import_graph: unknown format");
}

}  // namespace topicnet
