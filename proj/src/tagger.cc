#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "topicnet/core_model.h"
#include "topicnet/textprep.h"

namespace topicnet {

namespace {

// Function words, auxiliaries, common verbs and adverbs.
const std::unordered_set<std::string_view>& closed_class() {
  static const std::unordered_set<std::string_view> words = {
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every",
      "no", "all", "both", "either", "neither", "such", "other", "another", "several",
      "many", "much", "more", "most", "few", "fewer", "less", "least", "own", "same",
      "i", "we", "you", "he", "she", "it", "they", "me", "us", "him", "her", "them",
      "my", "our", "your", "his", "its", "their", "mine", "ours", "yours", "theirs",
      "who", "whom", "whose", "which", "what", "where", "when", "why", "how", "whether",
      "of", "in", "on", "at", "by", "for", "with", "about", "against", "between", "into",
      "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
      "out", "off", "over", "under", "within", "without", "across", "along", "among",
      "around", "behind", "beyond", "toward", "towards", "upon", "via", "per", "than",
      "and", "or", "but", "nor", "so", "yet", "if", "then", "because", "while", "although",
      "though", "unless", "since", "as", "until", "whereas", "thus", "hence", "therefore",
      "however", "moreover", "furthermore", "also", "not", "only", "very", "too", "just",
      "here", "there", "now", "again", "further", "once", "well", "even", "still", "often",
      "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had",
      "having", "do", "does", "did", "doing", "done", "can", "could", "will", "would",
      "shall", "should", "may", "might", "must", "use", "uses", "using", "used",
      "study", "studies", "studied", "studying", "propose", "proposes", "proposed",
      "develop", "develops", "developed", "developing", "investigate", "investigates",
      "investigated", "examine", "examines", "examined", "explore", "explores", "explored",
      "present", "presents", "presented", "describe", "describes", "described", "show",
      "shows", "showed", "shown", "provide", "provides", "provided", "support", "supports",
      "supported", "improve", "improves", "improved", "include", "includes", "included",
      "including", "following", "make", "makes", "made", "making", "take", "takes", "took",
      "give", "gives", "gave", "given", "get", "gets", "got", "find", "finds", "found",
      "help", "helps", "aim", "aims", "seek", "seeks", "focus", "focuses", "address",
      "addresses", "enable", "enables", "allow", "allows", "require", "requires", "yield",
      "yields", "combine", "combines", "apply", "applies", "applied", "extend", "extends",
      "measure", "measures", "compare", "compares", "determine", "determines", "identify",
      "identifies", "characterize", "characterizes", "understand", "understands", "build",
      "builds", "test", "tests", "train", "trains", "continue", "continues", "become",
      "becomes", "remain", "remains", "seem", "seems", "appear", "appears", "lead", "leads",
      "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
      "first", "second", "third", "last", "next", "new"};
  return words;
}

const std::unordered_set<std::string_view>& adjectives() {
  static const std::unordered_set<std::string_view> words = {
      "large", "small", "high", "low", "long", "short", "big", "little", "good", "bad",
      "great", "better", "best", "important", "major", "minor", "recent", "early", "late",
      "modern", "ancient", "novel", "efficient", "different", "significant", "specific",
      "general", "common", "rare", "complex", "simple", "basic", "latent", "linear",
      "nonlinear", "nuclear", "molecular", "cellular", "quantum", "social", "human",
      "public", "private", "free", "open", "deep", "shallow", "fast", "slow", "hot", "cold",
      "dark", "bright", "strong", "weak", "full", "empty", "whole", "real", "true", "false",
      "random", "dynamic", "static", "optimal", "robust", "scalable", "sparse", "dense",
      "young", "old", "key", "main", "primary", "secondary", "multiple", "single", "double",
      "global", "local", "regional", "urban", "rural", "solar", "polar", "lunar", "stellar",
      "genetic", "organic", "inorganic", "magnetic", "electric", "atomic", "chaotic",
      "economic", "academic", "scientific", "elastic", "plastic", "acoustic",
      "seismic", "volcanic", "oceanic", "arctic", "tropical", "repeated", "supervised",
      "unsupervised", "distributed", "algebraic", "combinatorial", "extremal", "discrete",
      "continuous", "stochastic", "probabilistic", "deterministic", "adaptive", "active",
      "passive", "alpine", "multiphase", "turbulent", "ecological", "evolutionary",
      "hominid", "curved", "cluttered", "normal", "modal", "structural", "neural",
      "behavioral", "cognitive", "chemical", "physical", "biological", "mathematical",
      "computational", "statistical", "theoretical", "experimental", "numerical",
      "thermal", "optical", "spatial", "temporal", "digital", "visual", "sensory"};
  return words;
}

// Words that look adjectival by suffix but are nouns.
const std::unordered_set<std::string_view>& noun_exceptions() {
  static const std::unordered_set<std::string_view> words = {
      "signal", "material", "materials", "potential", "proposal", "journal", "interval",
      "animal", "capital", "hospital", "trial", "principal", "arrival", "approval",
      "removal", "survival", "rival", "festival", "terminal", "manual", "individual",
      "professional", "crystal", "metal", "mineral", "protocol", "chemicals",
      "family", "supply", "assembly", "anomaly", "monopoly", "italy", "reply", "ally",
      "belly", "jelly", "rally", "folly", "fly", "variable", "table", "cable", "vegetable",
      "bible", "objective", "objectives", "initiative", "derivative", "alternative",
      "representative", "executive", "detective", "relative", "relatives", "motive",
      "archive", "native", "narrative", "incentive", "perspective"};
  return words;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool has_letter(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c) || c >= 0x80; });
}

bool has_upper_after_first(std::string_view s) {
  return std::any_of(s.begin() + 1, s.end(), [](unsigned char c) { return std::isupper(c); });
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::string_view tag_name(Tag tag) {
  switch (tag) {
    case Tag::kNoun: return "NOUN";
    case Tag::kProperNoun: return "PROPER_NOUN";
    case Tag::kAdjective: return "ADJECTIVE";
    case Tag::kOther: return "OTHER";
  }
  return "OTHER";
}

Tag parse_tag(std::string_view name) {
  if (name == "NOUN" || name == "NN" || name == "NNS") return Tag::kNoun;
  if (name == "PROPER_NOUN" || name == "PROPN" || name == "NNP" || name == "NNPS") {
    return Tag::kProperNoun;
  }
  if (name == "ADJECTIVE" || name == "ADJ" || name == "JJ" || name == "JJR" || name == "JJS") {
    return Tag::kAdjective;
  }
  return Tag::kOther;
}

Tag LexiconTagger::tag_word(std::string_view surface, bool sentence_initial) const {
  if (surface.empty() || !has_letter(surface)) return Tag::kOther;
  const std::string word = normalize_term(surface);
  if (closed_class().contains(word)) return Tag::kOther;

  const unsigned char first = static_cast<unsigned char>(surface.front());
  // "LinearSVM", "F-22": internal capitals mark a name wherever it appears.
  if (std::isupper(first) && (has_upper_after_first(surface) || has_digit(surface))) {
    return Tag::kProperNoun;
  }
  if (std::isupper(first) && !sentence_initial) return Tag::kProperNoun;

  if (noun_exceptions().contains(word)) return Tag::kNoun;
  if (adjectives().contains(word)) return Tag::kAdjective;
  if (ends_with(word, "ly")) return Tag::kOther;
  if (ends_with(word, "ed")) return Tag::kOther;
  for (std::string_view suffix : {"ous", "ive", "able", "ible", "ful", "less", "ical", "al",
                                  "ular", "ary", "ish"}) {
    if (ends_with(word, suffix) && word.size() > suffix.size() + 2) return Tag::kAdjective;
  }
  return Tag::kNoun;
}

std::vector<TaggedToken> LexiconTagger::tag(std::string_view, std::span<const Token> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    const bool initial = i == 0 || tokens[i - 1].sentence != t.sentence;
    out.push_back({t.surface, t.normalized, tag_word(t.surface, initial), t.position, t.sentence});
  }
  return out;
}

PreTaggedTagger::PreTaggedTagger(std::string_view tsv) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < tsv.size()) {
    std::size_t end = tsv.find('\n', start);
    if (end == std::string_view::npos) end = tsv.size();
    std::string_view line = tsv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    for (;;) {
      std::size_t tab = line.find('\t', f);
      fields.push_back(line.substr(f, tab == std::string_view::npos ? tab : tab - f));
      if (tab == std::string_view::npos) break;
      f = tab + 1;
    }
    if (fields.size() != 4) {
      throw ParseError("pre-tagged input: line " + std::to_string(line_no) +
                               ": expected 4 tab-separated fields", line_no);
    }
    std::size_t position = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), position);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw ParseError("pre-tagged input: line " + std::to_string(line_no) +
                               ": bad position", line_no);
    }
    tags_[std::string(fields[0])][position] = parse_tag(fields[3]);
  }
}

std::vector<TaggedToken> PreTaggedTagger::tag(std::string_view doc_id,
                                              std::span<const Token> tokens) const {
  const auto doc = tags_.find(std::string(doc_id));
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    Tag tag = Tag::kOther;
    if (doc != tags_.end()) {
      auto it = doc->second.find(t.position);
      if (it != doc->second.end()) tag = it->second;
    }
    out.push_back({t.surface, t.normalized, tag, t.position, t.sentence});
  }
  return out;
}

}  // namespace topicnet
