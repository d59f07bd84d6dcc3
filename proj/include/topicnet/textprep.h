#ifndef TOPICNET_TEXTPREP_H_
#define TOPICNET_TEXTPREP_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topicnet {

struct Token {
  std::string surface;
  std::string normalized;
  std::size_t sentence = 0;
  std::size_t position = 0;
};

/// Splits on whitespace and punctuation. Internal '-', '.', '\'' and '_'
/// stay inside a token ("F-22", "U.S.", "don't"). '.', '!' and '?' at a
/// token end close the sentence unless the token is an abbreviation with an
/// internal period.
std::vector<Token> tokenize(std::string_view text);

/// ASCII lowercase; other bytes pass through.
std::string normalize_term(std::string_view s);

enum class Tag { kNoun, kProperNoun, kAdjective, kOther };

std::string_view tag_name(Tag tag);
/// Maps coarse names and Penn Treebank tags onto the coarse alphabet.
Tag parse_tag(std::string_view name);

struct TaggedToken {
  std::string surface;
  std::string normalized;
  Tag tag = Tag::kOther;
  std::size_t position = 0;
  std::size_t sentence = 0;
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<TaggedToken> tag(std::string_view doc_id,
                                       std::span<const Token> tokens) const = 0;
};

/// Deterministic tagger: closed-class and adjective lexicons, suffix rules,
/// and capitalization outside sentence-initial position for proper nouns.
class LexiconTagger : public Tagger {
 public:
  std::vector<TaggedToken> tag(std::string_view doc_id,
                               std::span<const Token> tokens) const override;
  Tag tag_word(std::string_view surface, bool sentence_initial) const;
};

/// Replays tags produced by an external tagger, read from
/// `doc_id\tposition\tsurface\ttag` lines. Tokens without a row tag OTHER.
class PreTaggedTagger : public Tagger {
 public:
  explicit PreTaggedTagger(std::string_view tsv);
  std::vector<TaggedToken> tag(std::string_view doc_id,
                               std::span<const Token> tokens) const override;

 private:
  std::unordered_map<std::string, std::map<std::size_t, Tag>> tags_;
};

using Stopwords = std::unordered_set<std::string>;

Stopwords make_stopwords(std::span<const std::string> terms);

/// Built-in English stopword list used when none is supplied.
std::vector<std::string> default_stopwords();

/// A phrase found in one document. `key` is the normalized, single-space
/// joined form used for set operations.
struct PhraseOccurrence {
  std::string key;
  std::string display;
  std::size_t first_position = 0;
  std::size_t count = 0;
  std::size_t length = 0;
  /// Occurrences per surface form.
  std::map<std::string, std::size_t> surfaces;
};

using PhraseSet = std::map<std::string, PhraseOccurrence>;

/// Bigram windows over maximal (adjective)*(noun)+ runs inside a sentence.
/// Proper nouns count as nouns. Windows containing a stopword are dropped.
PhraseSet extract_noun_phrases(std::span<const TaggedToken> tagged, const Stopwords& stopwords);

/// Proper-noun tokens, deduplicated on normalized form. Display keeps the
/// surface of the first occurrence.
PhraseSet extract_proper_noun_unigrams(std::span<const TaggedToken> tagged,
                                       const Stopwords& stopwords);

/// 2x2 bigram table: n11 = c(w1 w2), n12 = c(w1 !w2), n21 = c(!w1 w2),
/// n22 = c(!w1 !w2).
struct ContingencyTable {
  std::int64_t n11 = 0;
  std::int64_t n12 = 0;
  std::int64_t n21 = 0;
  std::int64_t n22 = 0;

  std::int64_t total() const { return n11 + n12 + n21 + n22; }
  std::int64_t observed(int i, int j) const;
  /// row_i * col_j / total.
  double expected(int i, int j) const;
};

/// Chi-squared (1 dof) critical value at p = 0.001.
inline constexpr double kChiSquaredCritical = 10.8276;

/// Log-likelihood ratio G^2 = 2 sum n_ij ln(n_ij / m_ij), with empty cells
/// contributing 0. Throws std::invalid_argument on negative counts or an
/// empty table.
double assoc_score(const ContingencyTable& table);

/// Corpus-wide bigram statistics over normalized tokens. Bigrams never
/// cross sentence boundaries.
class CollocationStats {
 public:
  CollocationStats() = default;

  static CollocationStats build(std::span<const std::vector<Token>> documents,
                                std::size_t workers = 0);

  ContingencyTable table(std::string_view w1, std::string_view w2) const;
  double score(std::string_view w1, std::string_view w2) const;
  /// G^2 above the critical value with positive association (n11 > m11).
  bool significant(std::string_view w1, std::string_view w2) const;

  std::int64_t total_bigrams() const { return total_; }
  std::size_t distinct_bigrams() const { return bigrams_.size(); }
  /// Normalized "w1 w2" keys of significant bigrams.
  const std::unordered_set<std::string>& significant_set() const { return significant_; }

 private:
  std::unordered_map<std::string, std::int64_t> bigrams_;
  std::unordered_map<std::string, std::int64_t> first_;
  std::unordered_map<std::string, std::int64_t> second_;
  std::unordered_set<std::string> significant_;
  std::int64_t total_ = 0;
};

/// Adjacent in-sentence bigrams of the document that are significant
/// corpus-wide and contain no stopword.
PhraseSet extract_significant_phrases(std::span<const TaggedToken> tagged,
                                      const CollocationStats& stats,
                                      const Stopwords& stopwords);

}  // namespace topicnet

#endif  // TOPICNET_TEXTPREP_H_
