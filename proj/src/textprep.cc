#include "topicnet/textprep.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topicnet/parallel.h"

namespace topicnet {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool is_joiner(char c) { return c == '-' || c == '.' || c == '\'' || c == '_'; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::string bigram_key(std::string_view w1, std::string_view w2) {
  std::string key;
  key.reserve(w1.size() + w2.size() + 1);
  key.append(w1);
  key += ' ';
  key.append(w2);
  return key;
}

void record(PhraseSet& set, std::string key, std::string display, std::size_t position,
            std::size_t length) {
  auto [it, inserted] = set.try_emplace(key);
  PhraseOccurrence& occ = it->second;
  if (inserted) {
    occ.key = std::move(key);
    occ.display = display;
    occ.first_position = position;
    occ.length = length;
  }
  ++occ.count;
  ++occ.surfaces[display];
}

bool is_noun(Tag tag) { return tag == Tag::kNoun || tag == Tag::kProperNoun; }

}  // namespace

std::string normalize_term(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t sentence = 0;
  bool sentence_open = false;

  auto emit = [&](std::string_view surface) {
    tokens.push_back({std::string(surface), normalize_term(surface), sentence, tokens.size()});
    sentence_open = true;
  };
  auto close_sentence = [&] {
    if (sentence_open) {
      ++sentence;
      sentence_open = false;
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t chunk_end = i;
    while (chunk_end < text.size() && !std::isspace(static_cast<unsigned char>(text[chunk_end]))) {
      ++chunk_end;
    }
    std::string_view chunk = text.substr(i, chunk_end - i);
    i = chunk_end;
    if (chunk.empty()) continue;

    // Split the chunk into maximal runs of word bytes and joiners; a joiner
    // stays only between two word bytes.
    std::size_t pos = 0;
    bool ends_sentence = false;
    while (pos < chunk.size()) {
      while (pos < chunk.size() && !is_word_byte(static_cast<unsigned char>(chunk[pos]))) {
        if (is_terminator(chunk[pos])) ends_sentence = true;
        ++pos;
      }
      if (pos >= chunk.size()) break;
      // A terminator inside the chunk ("end.Next") is not a boundary; only
      // trailing ones count, so reset when a new word starts.
      ends_sentence = false;
      std::size_t start = pos;
      std::size_t end = pos;
      while (end < chunk.size()) {
        unsigned char c = static_cast<unsigned char>(chunk[end]);
        if (is_word_byte(c)) {
          ++end;
        } else if (is_joiner(chunk[end]) && end + 1 < chunk.size() &&
                   is_word_byte(static_cast<unsigned char>(chunk[end + 1]))) {
          end += 2;
        } else {
          break;
        }
      }
      std::string_view word = chunk.substr(start, end - start);
      // Abbreviations such as "U.S." keep their final period.
      if (end < chunk.size() && chunk[end] == '.' && word.find('.') != std::string_view::npos) {
        word = chunk.substr(start, end - start + 1);
        ++end;
      }
      emit(word);
      pos = end;
    }
    if (ends_sentence) close_sentence();
  }
  return tokens;
}

Stopwords make_stopwords(std::span<const std::string> terms) {
  Stopwords out;
  for (const std::string& t : terms) {
    if (!t.empty()) out.insert(normalize_term(t));
  }
  return out;
}

std::vector<std::string> default_stopwords() {
  return {"a", "about", "above", "after", "again", "against", "all", "also", "am", "an",
          "and", "any", "are", "as", "at", "be", "because", "been", "before", "being",
          "below", "between", "both", "but", "by", "can", "could", "did", "do", "does",
          "doing", "down", "during", "each", "either", "etc", "few", "for", "from",
          "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
          "him", "himself", "his", "how", "however", "i", "if", "in", "into", "is", "it",
          "its", "itself", "just", "may", "me", "might", "more", "most", "must", "my",
          "myself", "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
          "other", "our", "ours", "ourselves", "out", "over", "own", "per", "same", "shall",
          "she", "should", "so", "some", "such", "than", "that", "the", "their", "theirs",
          "them", "themselves", "then", "there", "these", "they", "this", "those", "through",
          "thus", "to", "too", "under", "until", "up", "upon", "us", "very", "via", "was",
          "we", "were", "what", "when", "where", "whether", "which", "while", "who", "whom",
          "whose", "why", "will", "with", "within", "without", "would", "you", "your",
          "yours", "yourself", "yourselves"};
}

PhraseSet extract_noun_phrases(std::span<const TaggedToken> tagged, const Stopwords& stopwords) {
  PhraseSet out;
  std::size_t i = 0;
  const std::size_t n = tagged.size();
  while (i < n) {
    // (adjective)* (noun)+ within one sentence.
    std::size_t start = i;
    std::size_t j = i;
    while (j < n && tagged[j].tag == Tag::kAdjective && tagged[j].sentence == tagged[start].sentence) {
      ++j;
    }
    std::size_t nouns_begin = j;
    while (j < n && is_noun(tagged[j].tag) && tagged[j].sentence == tagged[start].sentence) ++j;
    if (j == nouns_begin) {
      // No noun: restart after the adjectives (or after this token).
      i = std::max(nouns_begin, start + 1);
      continue;
    }
    for (std::size_t w = start; w + 1 < j; ++w) {
      const TaggedToken& a = tagged[w];
      const TaggedToken& b = tagged[w + 1];
      if (stopwords.contains(a.normalized) || stopwords.contains(b.normalized)) continue;
      record(out, bigram_key(a.normalized, b.normalized), a.surface + " " + b.surface,
             a.position, 2);
    }
    i = j;
  }
  return out;
}

PhraseSet extract_proper_noun_unigrams(std::span<const TaggedToken> tagged,
                                       const Stopwords& stopwords) {
  PhraseSet out;
  for (const TaggedToken& t : tagged) {
    if (t.tag != Tag::kProperNoun || stopwords.contains(t.normalized)) continue;
    record(out, t.normalized, t.surface, t.position, 1);
  }
  return out;
}

std::int64_t ContingencyTable::observed(int i, int j) const {
  if (i == 0) return j == 0 ? n11 : n12;
  return j == 0 ? n21 : n22;
}

double ContingencyTable::expected(int i, int j) const {
  const double row = i == 0 ? static_cast<double>(n11 + n12) : static_cast<double>(n21 + n22);
  const double col = j == 0 ? static_cast<double>(n11 + n21) : static_cast<double>(n12 + n22);
  return row * col / static_cast<double>(total());
}

double assoc_score(const ContingencyTable& table) {
  if (table.n11 < 0 || table.n12 < 0 || table.n21 < 0 || table.n22 < 0) {
    throw std::invalid_argument("assoc_score: negative count");
  }
  if (table.total() == 0) throw std::invalid_argument("assoc_score: empty table");
  const double total = static_cast<double>(table.total());
  const double rows[2] = {static_cast<double>(table.n11 + table.n12),
                          static_cast<double>(table.n21 + table.n22)};
  const double cols[2] = {static_cast<double>(table.n11 + table.n21),
                          static_cast<double>(table.n12 + table.n22)};
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double n = static_cast<double>(table.observed(i, j));
      if (n == 0.0) continue;
      // n / m = n * N / (row * col), kept as one ratio for accuracy.
      sum += n * std::log(n * total / (rows[i] * cols[j]));
    }
  }
  return std::max(0.0, 2.0 * sum);
}

CollocationStats CollocationStats::build(std::span<const std::vector<Token>> documents,
                                         std::size_t workers) {
  if (workers == 0) workers = default_workers();
  std::vector<CollocationStats> partial(workers);
  parallel_for(documents.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    CollocationStats& s = partial[w];
    for (std::size_t d = begin; d < end; ++d) {
      const auto& tokens = documents[d];
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i].sentence != tokens[i + 1].sentence) continue;
        ++s.bigrams_[bigram_key(tokens[i].normalized, tokens[i + 1].normalized)];
        ++s.first_[tokens[i].normalized];
        ++s.second_[tokens[i + 1].normalized];
        ++s.total_;
      }
    }
  });

  CollocationStats out = std::move(partial[0]);
  for (std::size_t w = 1; w < partial.size(); ++w) {
    for (auto& [k, v] : partial[w].bigrams_) out.bigrams_[k] += v;
    for (auto& [k, v] : partial[w].first_) out.first_[k] += v;
    for (auto& [k, v] : partial[w].second_) out.second_[k] += v;
    out.total_ += partial[w].total_;
  }

  for (const auto& [key, count] : out.bigrams_) {
    const std::size_t space = key.find(' ');
    std::string_view w1(key.data(), space);
    std::string_view w2(key.data() + space + 1, key.size() - space - 1);
    const ContingencyTable t = out.table(w1, w2);
    if (static_cast<double>(t.n11) > t.expected(0, 0) && assoc_score(t) > kChiSquaredCritical) {
      out.significant_.insert(key);
    }
  }
  return out;
}

ContingencyTable CollocationStats::table(std::string_view w1, std::string_view w2) const {
  auto lookup = [](const auto& map, const std::string& key) -> std::int64_t {
    auto it = map.find(key);
    return it == map.end() ? 0 : it->second;
  };
  ContingencyTable t;
  t.n11 = lookup(bigrams_, bigram_key(w1, w2));
  t.n12 = lookup(first_, std::string(w1)) - t.n11;
  t.n21 = lookup(second_, std::string(w2)) - t.n11;
  t.n22 = total_ - t.n11 - t.n12 - t.n21;
  return t;
}

double CollocationStats::score(std::string_view w1, std::string_view w2) const {
  return total_ == 0 ? 0.0 : assoc_score(table(w1, w2));
}

bool CollocationStats::significant(std::string_view w1, std::string_view w2) const {
  return significant_.contains(bigram_key(w1, w2));
}

PhraseSet extract_significant_phrases(std::span<const TaggedToken> tagged,
                                      const CollocationStats& stats,
                                      const Stopwords& stopwords) {
  PhraseSet out;
  for (std::size_t i = 0; i + 1 < tagged.size(); ++i) {
    const TaggedToken& a = tagged[i];
    const TaggedToken& b = tagged[i + 1];
    if (a.sentence != b.sentence) continue;
    if (stopwords.contains(a.normalized) || stopwords.contains(b.normalized)) continue;
    std::string key = bigram_key(a.normalized, b.normalized);
    if (!stats.significant_set().contains(key)) continue;
    record(out, std::move(key), a.surface + " " + b.surface, a.position, 2);
  }
  return out;
}

}  // namespace topicnet
