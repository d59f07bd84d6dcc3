// Session and hashing helpers shared by the unit and acceptance tests.
#ifndef TOPICNET_TESTS_FIXTURES_H_
#define TOPICNET_TESTS_FIXTURES_H_

#include <memory>
#include <string>

#include "topicnet/core_model.h"
#include "topicnet/graph.h"
#include "topicnet/hash.h"
#include "topicnet/service.h"
#include "topicnet/similarity.h"
#include "topicnet/synthetic.h"

namespace fixture {

inline std::shared_ptr<topicnet::Session> make_session(const topicnet::PlantedCorpus& pc,
                                                       double target_density = 0.5,
                                                       topicnet::LabelOptions options = {5, 1}) {
  using namespace topicnet;
  const TopicAssignment assignment = assign_clusters(pc.model);
  const SimilarityMatrix sims = pairwise_similarities(pc.model.beta());
  const double xi = select_threshold(sims, target_density).xi;
  TopicGraph graph = build_network(sims, xi, assignment);
  apply_partition(graph, louvain(graph, 0));
  auto analyzed = std::make_shared<AnalyzedCorpus>(
      AnalyzedCorpus::build(pc.corpus, LexiconTagger(), make_stopwords(pc.stopwords)));
  const DocSetLabeler labeler(analyzed);
  for (TopicId t = 0; t < pc.model.num_topics(); ++t) {
    const auto docs = assignment.documents_of(t);
    if (docs.empty()) continue;
    const LabelResult r = labeler.label(docs, pc.model.vocabulary(), pc.model.beta().row(t), options);
    if (!r.labels.empty()) graph.set_label(t, r.labels.front().display);
  }
  SessionArtifacts artifacts{pc.corpus, pc.model, assignment, std::move(graph), std::move(analyzed), xi};
  return std::make_shared<Session>(std::move(artifacts), options);
}

inline std::string matrix_text(const topicnet::CsrMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (const topicnet::SparseEntry& e : m.row(r)) {
      out += std::to_string(r) + ' ' + std::to_string(e.column) + ' ' + topicnet::format_double(e.value) + '\n';
    }
  }
  return out;
}

inline std::string matrix_text(const topicnet::DenseMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double v : m.row(r)) out += topicnet::format_double(v) + ' ';
    out += '\n';
  }
  return out;
}

/// sha256 over theta, beta and the exported graph of a session.
struct StateHashes {
  std::string theta, beta, graph;
  bool operator==(const StateHashes&) const = default;
};

inline StateHashes state_hashes(const topicnet::Session& s) {
  const auto& a = s.artifacts();
  return {topicnet::sha256_hex(matrix_text(a.model.theta())), topicnet::sha256_hex(matrix_text(a.model.beta())),
          topicnet::sha256_hex(topicnet::export_graph(a.graph, topicnet::ExportFormat::kJson))};
}

}  // namespace fixture

#endif  // TOPICNET_TESTS_FIXTURES_H_
