#ifndef TOPICNET_LABELING_H_
#define TOPICNET_LABELING_H_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicnet/core_model.h"
#include "topicnet/textprep.h"

namespace topicnet {

/// Harmonic mean 2xy/(x+y) of normalized frequency and position score;
/// 0 when both are 0. Throws std::invalid_argument outside [0, 1].
double prominence_weight(double x, double y);

/// A candidate term as weighted inside one document.
struct DocumentCandidate {
  std::string key;
  std::string display;
  double weight = 0.0;
  std::size_t first_position = 0;
  std::size_t count = 0;
  /// Occurrences per surface form in this document.
  std::map<std::string, std::size_t> surfaces;
};

/// Candidates = (significant phrases intersect noun phrases) union
/// proper-noun unigrams, weighted by prominence, best `top_c` kept.
/// x = count / N_d, y = 1 - first_position / N_d.
std::vector<DocumentCandidate> doc_candidates(std::span<const TaggedToken> doc,
                                              const CollocationStats& stats,
                                              const Stopwords& stopwords, std::size_t top_c);

/// Binary entropy in bits with 0 log 0 = 0.
double entropy(double p_plus);

/// Per-document top-C lists split into positive (in D_S) and negative sides.
struct LabelSplit {
  std::map<DocIndex, std::vector<std::string>> pos;
  std::map<DocIndex, std::vector<std::string>> neg;
  double p_plus = 0.0;
  double p_minus = 0.0;

  std::size_t size() const { return pos.size() + neg.size(); }
};

/// IG from counts: the label was extracted from `pos_with` positive and
/// `neg_with` negative documents out of `pos_total` and `neg_total`.
double information_gain(std::size_t pos_with, std::size_t neg_with, std::size_t pos_total,
                        std::size_t neg_total);

/// IG of `label` over the split. Throws std::invalid_argument when no
/// document's top-C list holds the label or the split is empty.
double information_gain(std::string_view label, const LabelSplit& split);

struct CandidateLabel {
  std::string key;
  std::string display;
  /// Positive documents whose top-C list holds the label.
  std::size_t frequency = 0;
  /// |D^l| over the whole split.
  std::size_t extraction_count = 0;
  double ig = 0.0;
  double beta_mean = 0.0;
  double final_score = 0.0;
};

/// Mean beta of the label's constituent words in one topic row. Words
/// missing from the vocabulary contribute 0.
double label_beta_mean(std::string_view key, const Vocabulary& vocabulary,
                       std::span<const SparseEntry> beta_row);

/// score = (frequency / max frequency + beta_mean / max beta_mean) / 2,
/// descending; ties by IG, then key.
std::vector<CandidateLabel> final_resort(std::vector<CandidateLabel> candidates);

/// Top-L words of a beta row by probability, ties by word id.
std::vector<std::string> lda_baseline_labels(std::span<const SparseEntry> beta_row,
                                             const Vocabulary& vocabulary, std::size_t count);

/// Tokens, tags and corpus-wide collocation statistics for a corpus.
struct AnalyzedCorpus {
  std::vector<std::string> doc_ids;
  std::vector<std::vector<TaggedToken>> tagged;
  CollocationStats stats;
  Stopwords stopwords;

  static AnalyzedCorpus build(const Corpus& corpus, const Tagger& tagger, Stopwords stopwords,
                              std::size_t workers = 0);
  std::size_t size() const { return tagged.size(); }
};

struct LabelResult {
  /// At most L labels, best first.
  std::vector<CandidateLabel> labels;
  /// Top-C candidates by IG after the final re-sort.
  std::vector<CandidateLabel> top_candidates;
  /// D_S covered the whole universe: IG is 0 everywhere and the order
  /// comes from the re-sort alone.
  bool degenerate = false;
};

struct LabelOptions {
  std::size_t candidates = 5;  // C
  std::size_t labels = 1;      // L
};

/// Runs DocSetLabeler over a corpus. Per-document candidate lists do not
/// depend on D_S and are cached per C, so labeling many document sets is
/// cheap. Safe for concurrent use.
class DocSetLabeler {
 public:
  explicit DocSetLabeler(std::shared_ptr<const AnalyzedCorpus> corpus, std::size_t workers = 0);

  const AnalyzedCorpus& corpus() const { return *corpus_; }

  /// Top-C candidate lists for every document.
  std::shared_ptr<const std::vector<std::vector<DocumentCandidate>>> candidates(
      std::size_t top_c) const;

  /// Builds pos/neg over `universe` with `positive` as D_S.
  LabelSplit split(std::span<const DocIndex> positive, std::span<const DocIndex> universe,
                   std::size_t top_c) const;

  /// Labels D_S = `positive` against `universe` (both document indices).
  /// Throws std::invalid_argument if D_S is empty, not inside the universe,
  /// or L > C.
  LabelResult label(std::span<const DocIndex> positive, std::span<const DocIndex> universe,
                    const Vocabulary& vocabulary, std::span<const SparseEntry> beta_row,
                    const LabelOptions& options) const;

  /// Universe = whole corpus.
  LabelResult label(std::span<const DocIndex> positive, const Vocabulary& vocabulary,
                    std::span<const SparseEntry> beta_row, const LabelOptions& options) const;

 private:
  std::shared_ptr<const AnalyzedCorpus> corpus_;
  std::size_t workers_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::shared_ptr<const std::vector<std::vector<DocumentCandidate>>>>
      cache_;
};

}  // namespace topicnet

#endif  // TOPICNET_LABELING_H_
