#ifndef TOPICNET_SYNTHETIC_H_
#define TOPICNET_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "topicnet/core_model.h"

namespace topicnet {

/// Random row-stochastic sparse beta. Each row draws `nonzeros_per_row`
/// distinct columns: about half from a Zipf-like shared background, the rest
/// from a block owned by the row's group, so rows in one group overlap more.
CsrMatrix random_sparse_beta(std::size_t topics, std::size_t vocabulary,
                             std::size_t nonzeros_per_row, std::uint64_t seed,
                             std::size_t groups = 8);

/// beta as `topic\tword\tprobability` lines.
std::string beta_to_tsv(const CsrMatrix& beta);
/// theta as `doc\ttopic\tproportion` lines, zeros omitted.
std::string theta_to_tsv(const DenseMatrix& theta);

struct PlantedCorpusOptions {
  std::size_t topics = 10;
  std::size_t docs_per_topic = 50;
  /// Topics per group; topics in one group share filler nouns.
  std::size_t group_size = 1;
  /// Occurrences of the planted phrase per document (the first at token 0).
  std::size_t mentions = 3;
  /// Probability that a document also mentions a sibling topic's phrase once.
  double crossover = 0.0;
  std::uint64_t seed = 1;
};

/// A corpus with one planted noun-phrase bigram per topic, plus a topic
/// model whose theta peaks on each document's source topic and whose beta
/// comes from theta-weighted word counts.
struct PlantedCorpus {
  Corpus corpus;
  TopicModel model;
  /// Normalized planted phrase of each topic.
  std::vector<std::string> phrases;
  /// Source topic of each document.
  std::vector<TopicId> source;
  std::vector<std::string> stopwords;

  std::string corpus_jsonl;
  std::string beta_tsv;
  std::string theta_tsv;
  std::string vocab_txt;
  std::string stopwords_txt;
};

/// Throws std::invalid_argument when more topics are requested than the
/// phrase inventory holds.
PlantedCorpus planted_corpus(const PlantedCorpusOptions& options);

/// Three topics. Topic 0 has 6 documents built on "graph theory" (year
/// 1999) and 4 built on "extremal combinatorics" (year 2000); topics 1 and
/// 2 carry their own phrases across both years.
PlantedCorpus relabel_fixture();

/// Number of planted phrases available.
std::size_t planted_phrase_capacity();

}  // namespace topicnet

#endif  // TOPICNET_SYNTHETIC_H_
