#include "topicnet/service.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>

#include "topicnet/hash.h"
#include "topicnet/textprep.h"

namespace topicnet {

namespace {

using nlohmann::json;

constexpr std::size_t kSnippetBytes = 200;

std::string snippet(const std::string& text) {
  if (text.size() <= kSnippetBytes) return text;
  std::size_t cut = kSnippetBytes;
  // Do not split a UTF-8 sequence.
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return text.substr(0, cut);
}

Response error(int status, const std::string& message) {
  return {status, {{"schema_version", kSchemaVersion}, {"error", message}}};
}

std::optional<std::size_t> parse_size(const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace

std::string Filter::fingerprint() const {
  std::set<std::string> terms;
  for (const std::string& k : keywords) {
    for (const Token& t : tokenize(k)) terms.insert(t.normalized);
  }
  json canonical = {{"facets", facets}, {"keywords", terms}};
  return canonical.dump();
}

Filter Filter::from_json(const json& body) {
  Filter f;
  if (!body.is_object()) throw BadRequest("filter body must be an object");
  if (body.contains("facets")) {
    const json& facets = body["facets"];
    if (!facets.is_object()) throw BadRequest("facets must be an object");
    for (auto it = facets.begin(); it != facets.end(); ++it) {
      if (!it.value().is_string()) throw BadRequest("facet values must be strings");
      f.facets[it.key()] = it.value().get<std::string>();
    }
  }
  if (body.contains("keywords")) {
    const json& keywords = body["keywords"];
    if (!keywords.is_array()) throw BadRequest("keywords must be an array");
    for (const json& k : keywords) {
      if (!k.is_string()) throw BadRequest("keywords must be strings");
      f.keywords.push_back(k.get<std::string>());
    }
  }
  return f;
}

Session::Session(SessionArtifacts artifacts, LabelOptions defaults, std::size_t workers)
    : artifacts_(std::move(artifacts)),
      defaults_(defaults),
      workers_(workers),
      labeler_(artifacts_.analyzed, workers) {
  if (!artifacts_.analyzed) throw std::invalid_argument("Session: missing analyzed corpus");
  if (artifacts_.corpus.size() != artifacts_.assignment.cluster_of.size()) {
    throw std::invalid_argument("Session: corpus and topic assignment sizes differ");
  }
  doc_terms_.resize(artifacts_.corpus.size());
  for (DocIndex d = 0; d < doc_terms_.size(); ++d) {
    for (const TaggedToken& t : artifacts_.analyzed->tagged[d]) doc_terms_[d].insert(t.normalized);
  }
  base_labels_.reserve(artifacts_.graph.num_nodes());
  for (const TopicNode& node : artifacts_.graph.nodes()) base_labels_.push_back(node.label);
  FilterResult all = apply_filter(Filter{});
  unfiltered_id_ = all.filter_id;
}

FilterResult Session::evaluate(const Filter& filter) const {
  std::vector<std::string> terms;
  for (const std::string& k : filter.keywords) {
    for (const Token& t : tokenize(k)) terms.push_back(t.normalized);
  }
  FilterResult out;
  out.fingerprint = filter.fingerprint();
  out.filter_id = sha256_hex(out.fingerprint).substr(0, 16);
  out.per_topic_counts.assign(artifacts_.model.num_topics(), 0);
  const Corpus& corpus = artifacts_.corpus;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const Document& doc = corpus[d];
    bool pass = std::all_of(filter.facets.begin(), filter.facets.end(), [&](const auto& kv) {
      auto it = doc.facets.find(kv.first);
      return it != doc.facets.end() && it->second == kv.second;
    });
    pass = pass && std::all_of(terms.begin(), terms.end(),
                               [&](const std::string& t) { return doc_terms_[d].contains(t); });
    if (!pass) continue;
    out.documents.push_back(d);
    ++out.per_topic_counts[artifacts_.assignment.cluster_of[d]];
  }
  return out;
}

FilterResult Session::apply_filter(const Filter& filter) {
  const std::string fingerprint = filter.fingerprint();
  FilterResult result = filters_.get_or_compute(
      sha256_hex(fingerprint).substr(0, 16), [&] { return evaluate(filter); });
  std::lock_guard lock(active_mutex_);
  active_ = result;
  return result;
}

std::optional<FilterResult> Session::find_filter(const std::string& filter_id) {
  if (auto found = filters_.find(filter_id)) return found;
  if (filter_id == unfiltered_id_) {
    return filters_.get_or_compute(filter_id, [&] { return evaluate(Filter{}); });
  }
  if (FilterResult active = active_filter(); active.filter_id == filter_id) return active;
  return std::nullopt;
}

FilterResult Session::active_filter() const {
  std::lock_guard lock(active_mutex_);
  return active_;
}

std::string Session::active_filter_id() const { return active_filter().filter_id; }

TopicLabels Session::compute_labels(TopicId topic, const FilterResult& filter,
                                    const LabelOptions& options) const {
  TopicLabels out;
  std::vector<DocIndex> positive;
  for (DocIndex d : filter.documents) {
    if (artifacts_.assignment.cluster_of[d] == topic) positive.push_back(d);
  }
  if (positive.empty()) {
    out.empty = true;
    return out;
  }
  LabelResult result = labeler_.label(positive, filter.documents,
                                      artifacts_.model.vocabulary(),
                                      artifacts_.model.beta().row(topic), options);
  out.degenerate = result.degenerate;
  for (const CandidateLabel& c : result.labels) out.labels.push_back(c.display);
  return out;
}

std::map<TopicId, TopicLabels> Session::relabel(const FilterResult& filter,
                                                const std::vector<TopicId>& topics,
                                                const LabelOptions& options) {
  if (options.labels == 0 || options.labels > options.candidates) {
    throw std::invalid_argument("relabel: need 1 <= L <= C");
  }
  std::map<TopicId, TopicLabels> out;
  for (TopicId t : topics) {
    if (t >= artifacts_.model.num_topics()) {
      throw std::out_of_range("relabel: unknown topic " + std::to_string(t));
    }
    LabelKey key{t, filter.fingerprint, options.candidates, options.labels};
    out[t] = labels_.get_or_compute(key, [&] { return compute_labels(t, filter, options); });
  }
  return out;
}

json Session::graph_payload(bool include_labels) {
  const FilterResult active = active_filter();
  const FilterResult* filter = &active;

  // Labels under a filter come from relabeling with the default C and L.
  std::map<TopicId, TopicLabels> filtered_labels;
  if (include_labels && filter->filter_id != unfiltered_id_) {
    std::vector<TopicId> all(artifacts_.graph.num_nodes());
    for (TopicId t = 0; t < all.size(); ++t) all[t] = t;
    filtered_labels = relabel(*filter, all, defaults_);
  }

  json nodes = json::array();
  for (const TopicNode& node : artifacts_.graph.nodes()) {
    std::string label;
    if (include_labels) {
      if (auto it = filtered_labels.find(node.topic); it != filtered_labels.end()) {
        label = it->second.labels.empty() ? std::string() : it->second.labels.front();
      } else {
        label = base_labels_[node.topic];
      }
    }
    nodes.push_back({{"id", node.topic},
                     {"label", label},
                     {"doc_count", node.doc_count},
                     {"community", node.community},
                     {"filtered_count", filter->per_topic_counts[node.topic]}});
  }
  json links = json::array();
  for (const Edge& e : artifacts_.graph.edges()) {
    links.push_back({{"source", e.x}, {"target", e.y}, {"weight", e.weight}});
  }
  return {{"schema_version", kSchemaVersion},
          {"directed", false},
          {"multigraph", false},
          {"graph",
           {{"num_topics", artifacts_.graph.num_nodes()},
            {"xi", artifacts_.xi},
            {"filter_id", filter->filter_id},
            {"filtered_documents", filter->documents.size()}}},
          {"nodes", std::move(nodes)},
          {"links", std::move(links)}};
}

json Session::topic_documents(TopicId topic, const FilterResult& filter, std::size_t page,
                              std::size_t page_size) const {
  if (page_size == 0) throw std::invalid_argument("page_size must be positive");
  std::vector<DocIndex> docs;
  for (DocIndex d : filter.documents) {
    if (artifacts_.assignment.cluster_of[d] == topic) docs.push_back(d);
  }
  const std::size_t pages = (docs.size() + page_size - 1) / page_size;
  json items = json::array();
  for (std::size_t i = page * page_size; i < std::min(docs.size(), (page + 1) * page_size); ++i) {
    const Document& doc = artifacts_.corpus[docs[i]];
    items.push_back({{"id", doc.id}, {"snippet", snippet(doc.text)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"topic", topic},
          {"filter_id", filter.filter_id},
          {"page", page},
          {"page_size", page_size},
          {"pages", pages},
          {"total", docs.size()},
          {"documents", std::move(items)}};
}

void ServiceApp::set_session(std::shared_ptr<Session> session) {
  std::lock_guard lock(mutex_);
  session_ = std::move(session);
}

std::shared_ptr<Session> ServiceApp::session() const {
  std::lock_guard lock(mutex_);
  return session_;
}

Response ServiceApp::handle(const std::string& method, const std::string& path,
                            const std::map<std::string, std::string>& query,
                            const std::string& body) {
  try {
    if (method == "GET" && path == "/health") {
      return {200, {{"schema_version", kSchemaVersion},
                    {"status", session() ? "ok" : "starting"}}};
    }
    if (method == "GET" && path == "/graph") return graph(query);
    if (method == "POST" && path == "/filter") return filter(body);
    if (method == "POST" && path == "/relabel") return relabel(body);
    const std::string prefix = "/topics/";
    const std::string suffix = "/documents";
    if (method == "GET" && path.starts_with(prefix) && path.ends_with(suffix) &&
        path.size() > prefix.size() + suffix.size()) {
      auto topic = parse_size(path.substr(prefix.size(), path.size() - prefix.size() - suffix.size()));
      if (!topic) return error(400, "bad topic id");
      return documents(*topic, query);
    }
    return error(404, "no route for " + method + " " + path);
  } catch (const BadRequest& e) {
    return error(400, e.what());
  } catch (const json::exception& e) {
    return error(400, e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const std::out_of_range& e) {
    return error(404, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

Response ServiceApp::graph(const std::map<std::string, std::string>& query) {
  auto s = session();
  if (!s) return error(503, "session not initialized");
  bool include_labels = true;
  if (auto it = query.find("labels"); it != query.end()) {
    if (it->second == "true" || it->second == "1") {
      include_labels = true;
    } else if (it->second == "false" || it->second == "0") {
      include_labels = false;
    } else {
      return error(400, "labels must be true or false");
    }
  }
  return {200, s->graph_payload(include_labels)};
}

Response ServiceApp::filter(const std::string& body) {
  auto s = session();
  if (!s) return error(503, "session not initialized");
  const json request = body.empty() ? json::object() : json::parse(body);
  FilterResult result = s->apply_filter(Filter::from_json(request));
  return {200, {{"schema_version", kSchemaVersion},
                {"filter_id", result.filter_id},
                {"doc_count", result.documents.size()},
                {"per_topic_counts", result.per_topic_counts}}};
}

Response ServiceApp::relabel(const std::string& body) {
  auto s = session();
  if (!s) return error(503, "session not initialized");
  const json request = body.empty() ? json::object() : json::parse(body);
  if (!request.is_object()) throw BadRequest("relabel body must be an object");
  const std::string filter_id = request.value("filter_id", s->unfiltered_id());
  std::optional<FilterResult> filter = s->find_filter(filter_id);
  if (!filter) return error(404, "unknown filter_id " + filter_id);

  std::vector<TopicId> topics;
  if (request.contains("topics")) {
    for (const json& t : request.at("topics")) topics.push_back(t.get<TopicId>());
  } else {
    for (TopicId t = 0; t < s->artifacts().model.num_topics(); ++t) topics.push_back(t);
  }
  LabelOptions options = s->defaults();
  options.candidates = request.value("C", options.candidates);
  options.labels = request.value("L", options.labels);

  json labels = json::object();
  json empty = json::array();
  json degenerate = json::array();
  for (const auto& [topic, result] : s->relabel(*filter, topics, options)) {
    labels[std::to_string(topic)] = result.labels;
    if (result.empty) empty.push_back(topic);
    if (result.degenerate) degenerate.push_back(topic);
  }
  return {200, {{"schema_version", kSchemaVersion},
                {"filter_id", filter->filter_id},
                {"labels", std::move(labels)},
                {"empty_topics", std::move(empty)},
                {"degenerate_topics", std::move(degenerate)}}};
}

Response ServiceApp::documents(TopicId topic, const std::map<std::string, std::string>& query) {
  auto s = session();
  if (!s) return error(503, "session not initialized");
  if (topic >= s->artifacts().model.num_topics()) return error(404, "unknown topic");
  std::string filter_id = s->unfiltered_id();
  if (auto it = query.find("filter_id"); it != query.end()) filter_id = it->second;
  std::optional<FilterResult> filter = s->find_filter(filter_id);
  if (!filter) return error(404, "unknown filter_id " + filter_id);
  std::size_t page = 0;
  std::size_t page_size = 20;
  if (auto it = query.find("page"); it != query.end()) {
    auto v = parse_size(it->second);
    if (!v) return error(400, "bad page");
    page = *v;
  }
  if (auto it = query.find("page_size"); it != query.end()) {
    auto v = parse_size(it->second);
    if (!v || *v == 0) return error(400, "bad page_size");
    page_size = *v;
  }
  return {200, s->topic_documents(topic, *filter, page, page_size)};
}

}  // namespace topicnet
