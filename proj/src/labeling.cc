#include "topicnet/labeling.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "topicnet/parallel.h"

namespace topicnet {

double prominence_weight(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::invalid_argument("prominence_weight: inputs must lie in [0, 1]");
  }
  if (x + y == 0.0) return 0.0;
  return 2.0 * x * y / (x + y);
}

std::vector<DocumentCandidate> doc_candidates(std::span<const TaggedToken> doc,
                                              const CollocationStats& stats,
                                              const Stopwords& stopwords, std::size_t top_c) {
  if (doc.empty()) return {};
  if (top_c == 0) throw std::invalid_argument("doc_candidates: C must be at least 1");

  const PhraseSet significant = extract_significant_phrases(doc, stats, stopwords);
  const PhraseSet noun_phrases = extract_noun_phrases(doc, stopwords);
  const PhraseSet proper = extract_proper_noun_unigrams(doc, stopwords);

  std::vector<const PhraseOccurrence*> chosen;
  for (const auto& [key, occ] : significant) {
    if (noun_phrases.contains(key)) chosen.push_back(&occ);
  }
  for (const auto& [key, occ] : proper) chosen.push_back(&occ);

  const double n = static_cast<double>(doc.size());
  std::vector<DocumentCandidate> out;
  out.reserve(chosen.size());
  for (const PhraseOccurrence* occ : chosen) {
    const double x = std::min(1.0, static_cast<double>(occ->count) / n);
    const double y = 1.0 - static_cast<double>(occ->first_position) / n;
    out.push_back({occ->key, occ->display, prominence_weight(x, y), occ->first_position,
                   occ->count, occ->surfaces});
  }
  std::sort(out.begin(), out.end(), [](const DocumentCandidate& a, const DocumentCandidate& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.first_position != b.first_position) return a.first_position < b.first_position;
    return a.key < b.key;
  });
  if (out.size() > top_c) out.resize(top_c);
  return out;
}

double entropy(double p_plus) {
  auto term = [](double p) { return p <= 0.0 ? 0.0 : -p * std::log2(p); };
  return term(p_plus) + term(1.0 - p_plus);
}

double information_gain(std::size_t pos_with, std::size_t neg_with, std::size_t pos_total,
                        std::size_t neg_total) {
  if (pos_with > pos_total || neg_with > neg_total) {
    throw std::invalid_argument("information_gain: subset larger than its side");
  }
  const double total = static_cast<double>(pos_total + neg_total);
  if (total == 0.0) throw std::invalid_argument("information_gain: empty document set");
  const double with = static_cast<double>(pos_with + neg_with);
  const double without = total - with;
  double ig = entropy(static_cast<double>(pos_total) / total);
  if (with > 0.0) ig -= with / total * entropy(static_cast<double>(pos_with) / with);
  if (without > 0.0) {
    ig -= without / total * entropy(static_cast<double>(pos_total - pos_with) / without);
  }
  return std::max(0.0, ig);
}

double information_gain(std::string_view label, const LabelSplit& split) {
  auto count = [&](const std::map<DocIndex, std::vector<std::string>>& side) {
    std::size_t n = 0;
    for (const auto& [doc, terms] : side) {
      if (std::find(terms.begin(), terms.end(), label) != terms.end()) ++n;
    }
    return n;
  };
  const std::size_t pos_with = count(split.pos);
  const std::size_t neg_with = count(split.neg);
  if (pos_with + neg_with == 0) {
    throw std::invalid_argument("information_gain: label '" + std::string(label) +
                                "' was not extracted from any document");
  }
  return information_gain(pos_with, neg_with, split.pos.size(), split.neg.size());
}

double label_beta_mean(std::string_view key, const Vocabulary& vocabulary,
                       std::span<const SparseEntry> beta_row) {
  double sum = 0.0;
  std::size_t words = 0;
  std::size_t start = 0;
  while (start <= key.size()) {
    std::size_t end = key.find(' ', start);
    if (end == std::string_view::npos) end = key.size();
    const WordId id = vocabulary.find(key.substr(start, end - start));
    if (id < vocabulary.size()) {
      auto it = std::lower_bound(beta_row.begin(), beta_row.end(), id,
                                 [](const SparseEntry& e, WordId w) { return e.column < w; });
      if (it != beta_row.end() && it->column == id) sum += it->value;
    }
    ++words;
    start = end + 1;
  }
  return words == 0 ? 0.0 : sum / static_cast<double>(words);
}

std::vector<CandidateLabel> final_resort(std::vector<CandidateLabel> candidates) {
  std::size_t max_freq = 0;
  double max_beta = 0.0;
  for (const CandidateLabel& c : candidates) {
    max_freq = std::max(max_freq, c.frequency);
    max_beta = std::max(max_beta, c.beta_mean);
  }
  for (CandidateLabel& c : candidates) {
    const double f = max_freq == 0 ? 0.0
                                   : static_cast<double>(c.frequency) / static_cast<double>(max_freq);
    const double b = max_beta > 0.0 ? c.beta_mean / max_beta : 0.0;
    c.final_score = 0.5 * f + 0.5 * b;
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CandidateLabel& a, const CandidateLabel& b) {
                     if (a.final_score != b.final_score) return a.final_score > b.final_score;
                     if (a.ig != b.ig) return a.ig > b.ig;
                     return a.key < b.key;
                   });
  return candidates;
}

std::vector<std::string> lda_baseline_labels(std::span<const SparseEntry> beta_row,
                                             const Vocabulary& vocabulary, std::size_t count) {
  std::vector<SparseEntry> entries(beta_row.begin(), beta_row.end());
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.value != b.value ? a.value > b.value : a.column < b.column;
  });
  std::vector<std::string> out;
  for (const SparseEntry& e : entries) {
    if (out.size() == count) return out;
    if (e.value > 0.0) out.push_back(vocabulary.term(e.column));
  }
  // Remaining words all have probability 0; ties go by word id.
  std::set<WordId> used;
  for (const SparseEntry& e : entries) {
    if (e.value > 0.0) used.insert(e.column);
  }
  for (WordId w = 0; w < vocabulary.size() && out.size() < count; ++w) {
    if (!used.contains(w)) out.push_back(vocabulary.term(w));
  }
  return out;
}

AnalyzedCorpus AnalyzedCorpus::build(const Corpus& corpus, const Tagger& tagger,
                                     Stopwords stopwords, std::size_t workers) {
  AnalyzedCorpus out;
  out.stopwords = std::move(stopwords);
  const std::size_t n = corpus.size();
  std::vector<std::vector<Token>> tokens(n);
  out.tagged.resize(n);
  out.doc_ids.reserve(n);
  for (const Document& d : corpus.documents()) out.doc_ids.push_back(d.id);
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      tokens[i] = tokenize(corpus[i].text);
      out.tagged[i] = tagger.tag(corpus[i].id, tokens[i]);
    }
  });
  out.stats = CollocationStats::build(tokens, workers);
  return out;
}

DocSetLabeler::DocSetLabeler(std::shared_ptr<const AnalyzedCorpus> corpus, std::size_t workers)
    : corpus_(std::move(corpus)), workers_(workers) {}

std::shared_ptr<const std::vector<std::vector<DocumentCandidate>>> DocSetLabeler::candidates(
    std::size_t top_c) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(top_c);
  if (it != cache_.end()) return it->second;
  auto lists = std::make_shared<std::vector<std::vector<DocumentCandidate>>>(corpus_->size());
  parallel_for(corpus_->size(), workers_, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t d = begin; d < end; ++d) {
      (*lists)[d] = doc_candidates(corpus_->tagged[d], corpus_->stats, corpus_->stopwords, top_c);
    }
  });
  cache_.emplace(top_c, lists);
  return lists;
}

LabelSplit DocSetLabeler::split(std::span<const DocIndex> positive,
                                std::span<const DocIndex> universe, std::size_t top_c) const {
  const auto lists = candidates(top_c);
  const std::set<DocIndex> pos_set(positive.begin(), positive.end());
  LabelSplit out;
  for (DocIndex d : universe) {
    std::vector<std::string> terms;
    for (const DocumentCandidate& c : (*lists)[d]) terms.push_back(c.key);
    (pos_set.contains(d) ? out.pos : out.neg).emplace(d, std::move(terms));
  }
  const double total = static_cast<double>(out.size());
  out.p_plus = total == 0.0 ? 0.0 : static_cast<double>(out.pos.size()) / total;
  out.p_minus = total == 0.0 ? 0.0 : 1.0 - out.p_plus;
  return out;
}

LabelResult DocSetLabeler::label(std::span<const DocIndex> positive,
                                 std::span<const DocIndex> universe, const Vocabulary& vocabulary,
                                 std::span<const SparseEntry> beta_row,
                                 const LabelOptions& options) const {
  if (options.labels == 0 || options.candidates == 0) {
    throw std::invalid_argument("docset_label: C and L must be at least 1");
  }
  if (options.labels > options.candidates) {
    throw std::invalid_argument("docset_label: L must not exceed C");
  }
  if (positive.empty()) throw std::invalid_argument("docset_label: empty document set");

  const std::set<DocIndex> universe_set(universe.begin(), universe.end());
  const std::set<DocIndex> pos_set(positive.begin(), positive.end());
  for (DocIndex d : pos_set) {
    if (!universe_set.contains(d)) {
      throw std::invalid_argument("docset_label: document set is not inside the corpus");
    }
  }
  const auto lists = candidates(options.candidates);

  // Per-document top-C lists, split by membership in D_S.
  struct Tally {
    std::size_t pos = 0;
    std::size_t neg = 0;
    std::map<std::string, std::size_t> surfaces;
  };
  std::unordered_map<std::string, Tally> tallies;
  for (DocIndex d : pos_set) {
    for (const DocumentCandidate& c : (*lists)[d]) {
      Tally& t = tallies[c.key];
      ++t.pos;
      for (const auto& [surface, n] : c.surfaces) t.surfaces[surface] += n;
    }
  }
  const std::size_t pos_total = pos_set.size();
  const std::size_t neg_total = universe_set.size() - pos_total;
  for (DocIndex d : universe_set) {
    if (pos_set.contains(d)) continue;
    for (const DocumentCandidate& c : (*lists)[d]) {
      auto it = tallies.find(c.key);
      if (it != tallies.end()) ++it->second.neg;
    }
  }

  // Information gain for every positive-side label.
  std::vector<CandidateLabel> scored;
  scored.reserve(tallies.size());
  for (const auto& [key, t] : tallies) {
    CandidateLabel c;
    c.key = key;
    std::size_t best = 0;
    for (const auto& [surface, n] : t.surfaces) {
      if (n > best) {
        best = n;
        c.display = surface;
      }
    }
    c.frequency = t.pos;
    c.extraction_count = t.pos + t.neg;
    c.ig = information_gain(t.pos, t.neg, pos_total, neg_total);
    scored.push_back(std::move(c));
  }
  std::sort(scored.begin(), scored.end(), [](const CandidateLabel& a, const CandidateLabel& b) {
    if (a.ig != b.ig) return a.ig > b.ig;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.key < b.key;
  });

  // Keep top C, re-sort, return top L.
  if (scored.size() > options.candidates) scored.resize(options.candidates);
  for (CandidateLabel& c : scored) c.beta_mean = label_beta_mean(c.key, vocabulary, beta_row);

  LabelResult result;
  result.degenerate = neg_total == 0;
  result.top_candidates = final_resort(std::move(scored));
  result.labels.assign(result.top_candidates.begin(),
                       result.top_candidates.begin() +
                           std::min(options.labels, result.top_candidates.size()));
  return result;
}

LabelResult DocSetLabeler::label(std::span<const DocIndex> positive, const Vocabulary& vocabulary,
                                 std::span<const SparseEntry> beta_row,
                                 const LabelOptions& options) const {
  std::vector<DocIndex> all(corpus_->size());
  for (DocIndex i = 0; i < all.size(); ++i) all[i] = i;
  return label(positive, all, vocabulary, beta_row, options);
}

}  // namespace topicnet
