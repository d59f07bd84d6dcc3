#ifndef TOPICNET_SERVICE_H_
#define TOPICNET_SERVICE_H_

#include <cstddef>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "topicnet/core_model.h"
#include "topicnet/graph.h"
#include "topicnet/labeling.h"

namespace topicnet {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kCacheCapacity = 64;

/// Conjunction of facet equalities and keyword containment.
struct Filter {
  std::map<std::string, std::string> facets;
  std::vector<std::string> keywords;

  /// Canonical serialization: sorted facets, normalized sorted keywords.
  std::string fingerprint() const;
  static Filter from_json(const nlohmann::json& body);
};

struct FilterResult {
  std::string filter_id;
  std::string fingerprint;
  std::vector<DocIndex> documents;
  std::vector<std::size_t> per_topic_counts;
};

struct TopicLabels {
  std::vector<std::string> labels;
  /// No document of the topic passes the filter.
  bool empty = false;
  /// Every remaining document belongs to the topic.
  bool degenerate = false;
};

/// Small thread-safe LRU map. Concurrent get_or_compute calls for the same
/// key run the computation once; later callers wait for the first.
template <typename Key, typename Value>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  template <typename Fn>
  Value get_or_compute(const Key& key, Fn&& compute) {
    std::unique_lock lock(mutex_);
    if (auto it = index_.find(key); it != index_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return it->second->second;
    }
    if (auto it = inflight_.find(key); it != inflight_.end()) {
      std::shared_future<Value> pending = it->second;
      lock.unlock();
      return pending.get();
    }
    std::promise<Value> promise;
    inflight_.emplace(key, promise.get_future().share());
    lock.unlock();
    try {
      Value value = compute();
      lock.lock();
      insert_locked(key, value);
      inflight_.erase(key);
      lock.unlock();
      promise.set_value(value);
      return value;
    } catch (...) {
      lock.lock();
      inflight_.erase(key);
      lock.unlock();
      promise.set_exception(std::current_exception());
      throw;
    }
  }

  std::optional<Value> find(const Key& key) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  void put(const Key& key, Value value) {
    std::lock_guard lock(mutex_);
    insert_locked(key, std::move(value));
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return index_.size();
  }

 private:
  void insert_locked(const Key& key, Value value) {
    if (auto it = index_.find(key); it != index_.end()) {
      it->second->second = std::move(value);
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.emplace_front(key, std::move(value));
    index_.emplace(key, order_.begin());
    while (index_.size() > capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
  }

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::pair<Key, Value>> order_;
  std::map<Key, typename std::list<std::pair<Key, Value>>::iterator> index_;
  std::map<Key, std::shared_future<Value>> inflight_;
};

/// Everything the session serves. Read-only once the session is built.
struct SessionArtifacts {
  Corpus corpus;
  TopicModel model;
  TopicAssignment assignment;
  TopicGraph graph;
  std::shared_ptr<const AnalyzedCorpus> analyzed;
  double xi = 0.0;
};

class Session {
 public:
  Session(SessionArtifacts artifacts, LabelOptions defaults, std::size_t workers = 0);

  const SessionArtifacts& artifacts() const { return artifacts_; }
  const DocSetLabeler& labeler() const { return labeler_; }
  const LabelOptions& defaults() const { return defaults_; }

  /// Evaluates and registers a filter; it becomes the active filter.
  FilterResult apply_filter(const Filter& filter);
  std::optional<FilterResult> find_filter(const std::string& filter_id);
  /// Id of the filter that passes every document.
  const std::string& unfiltered_id() const { return unfiltered_id_; }
  std::string active_filter_id() const;

  /// Labels for each topic over the filtered documents. Results are cached
  /// by (topic, filter fingerprint, C, L).
  std::map<TopicId, TopicLabels> relabel(const FilterResult& filter,
                                         const std::vector<TopicId>& topics,
                                         const LabelOptions& options);

  /// The filter most recently passed to apply_filter.
  FilterResult active_filter() const;

  /// Node-link document with labels, communities, doc counts and counts
  /// under the active filter. Does not change session state beyond caches.
  nlohmann::json graph_payload(bool include_labels);

  /// Page of document ids and snippets for a topic under a filter.
  nlohmann::json topic_documents(TopicId topic, const FilterResult& filter, std::size_t page,
                                 std::size_t page_size) const;

 private:
  using LabelKey = std::tuple<TopicId, std::string, std::size_t, std::size_t>;

  FilterResult evaluate(const Filter& filter) const;
  TopicLabels compute_labels(TopicId topic, const FilterResult& filter,
                             const LabelOptions& options) const;

  SessionArtifacts artifacts_;
  LabelOptions defaults_;
  std::size_t workers_;
  DocSetLabeler labeler_;
  std::vector<std::unordered_set<std::string>> doc_terms_;
  std::vector<std::string> base_labels_;
  std::string unfiltered_id_;

  mutable std::mutex active_mutex_;
  FilterResult active_;
  LruCache<std::string, FilterResult> filters_{kCacheCapacity};
  LruCache<LabelKey, TopicLabels> labels_{kCacheCapacity};
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// HTTP routes without the transport. Every body carries schema_version.
class ServiceApp {
 public:
  ServiceApp() = default;
  explicit ServiceApp(std::shared_ptr<Session> session) : session_(std::move(session)) {}

  void set_session(std::shared_ptr<Session> session);
  std::shared_ptr<Session> session() const;

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query, const std::string& body);

 private:
  Response graph(const std::map<std::string, std::string>& query);
  Response filter(const std::string& body);
  Response relabel(const std::string& body);
  Response documents(TopicId topic, const std::map<std::string, std::string>& query);

  mutable std::mutex mutex_;
  std::shared_ptr<Session> session_;
};

/// Serves a ServiceApp over HTTP until stop() is called.
class HttpServer {
 public:
  explicit HttpServer(ServiceApp& app);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace topicnet

#endif  // TOPICNET_SERVICE_H_
