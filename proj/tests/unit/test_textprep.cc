#include <doctest.h>

#include <random>

#include "oracles.h"
#include "topicnet/core_model.h"
#include "topicnet/synthetic.h"
#include "topicnet/textprep.h"

using namespace topicnet;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<TaggedToken> tag_text(std::string_view text) {
  const auto tokens = tokenize(text);
  return LexiconTagger().tag("d", tokens);
}

Stopwords builtin_stopwords() {
  const auto words = default_stopwords();
  return make_stopwords(words);
}

std::vector<std::string> keys(const PhraseSet& set) {
  std::vector<std::string> out;
  for (const auto& [k, _] : set) out.push_back(k);
  return out;
}

}  // namespace

TEST_SUITE("textprep") {

TEST_CASE("tokenizer keeps joiners inside tokens") {
  CHECK(surfaces(tokenize("The F-22 flew over the U.S. today.")) ==
        std::vector<std::string>{"The", "F-22", "flew", "over", "the", "U.S.", "today"});
  CHECK(surfaces(tokenize("don't stop_words, (ok)")) ==
        std::vector<std::string>{"don't", "stop_words", "ok"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,;  ").empty());
}

TEST_CASE("tokenizer tracks sentences and positions") {
  const auto tokens = tokenize("Graph theory works. Protein folding too! Why? yes");
  REQUIRE(tokens.size() == 8);
  CHECK(tokens[0].sentence == 0);
  CHECK(tokens[2].sentence == 0);
  CHECK(tokens[3].sentence == 1);
  CHECK(tokens[6].sentence == 2);
  CHECK(tokens[7].sentence == 3);
  for (std::size_t i = 0; i < tokens.size(); ++i) CHECK(tokens[i].position == i);
  CHECK(tokens[3].normalized == "protein");
}

TEST_CASE("normalization is ascii lowercase") {
  CHECK(normalize_term("GrAPH") == "graph");
  CHECK(normalize_term("Caf\xc3\x89") == "caf\xc3\x89");
}

TEST_CASE("lexicon tagger examples") {
  const LexiconTagger tagger;
  CHECK(tagger.tag_word("protein", false) == Tag::kNoun);
  CHECK(tagger.tag_word("folding", false) == Tag::kNoun);
  CHECK(tagger.tag_word("Wikipedia", false) == Tag::kProperNoun);
  CHECK(tagger.tag_word("F-22", true) == Tag::kProperNoun);
  CHECK(tagger.tag_word("the", false) == Tag::kOther);
  CHECK(tagger.tag_word("The", true) == Tag::kOther);
  CHECK(tagger.tag_word("quickly", false) == Tag::kOther);
  CHECK(tagger.tag_word("computational", false) == Tag::kAdjective);
  CHECK(tagger.tag_word("Graph", true) == Tag::kNoun);
}

TEST_CASE("tag names parse both alphabets") {
  CHECK(parse_tag("NN") == Tag::kNoun);
  CHECK(parse_tag("NNS") == Tag::kNoun);
  CHECK(parse_tag("NNP") == Tag::kProperNoun);
  CHECK(parse_tag("JJ") == Tag::kAdjective);
  CHECK(parse_tag("VBD") == Tag::kOther);
  for (Tag t : {Tag::kNoun, Tag::kProperNoun, Tag::kAdjective, Tag::kOther}) {
    CHECK(parse_tag(tag_name(t)) == t);
  }
}

TEST_CASE("noun phrase windows") {
  const Stopwords stop = builtin_stopwords();
  SUBCASE("adjective noun noun run yields its bigram windows") {
    const PhraseSet np = extract_noun_phrases(tag_text("We study computational protein folding."), stop);
    CHECK(keys(np) == std::vector<std::string>{"computational protein", "protein folding"});
  }
  SUBCASE("runs do not cross sentences") {
    const PhraseSet np = extract_noun_phrases(tag_text("We like graph. Theory matters."), stop);
    CHECK(np.count("graph theory") == 0);
  }
  SUBCASE("windows with a stopword are dropped") {
    CHECK(extract_noun_phrases(tag_text("the graph"), stop).empty());
  }
  SUBCASE("counts and first positions") {
    const PhraseSet np = extract_noun_phrases(
        tag_text("Graph theory is old. We love graph theory and graph theory."), stop);
    REQUIRE(np.count("graph theory") == 1);
    const PhraseOccurrence& occ = np.at("graph theory");
    CHECK(occ.count == 3);
    CHECK(occ.first_position == 0);
    CHECK(occ.length == 2);
    CHECK(occ.surfaces.at("graph theory") == 2);
    CHECK(occ.surfaces.at("Graph theory") == 1);
  }
}

TEST_CASE("proper noun unigrams") {
  const PhraseSet pn =
      extract_proper_noun_unigrams(tag_text("The F-22 flew. Then the F-22 landed near Boston."), builtin_stopwords());
  CHECK(pn.count("f-22") == 1);
  CHECK(pn.at("f-22").count == 2);
  CHECK(pn.at("f-22").display == "F-22");
  CHECK(pn.count("boston") == 1);
  CHECK(pn.count("the") == 0);
}

TEST_CASE("assoc_score examples") {
  SUBCASE("perfect association") {
    const ContingencyTable t{10, 0, 0, 10};
    CHECK(std::abs(assoc_score(t) - 40.0 * std::log(2.0)) <= 1e-12);
    CHECK(std::abs(assoc_score(t) - 27.7259) < 1e-4);
  }
  SUBCASE("independence") { CHECK(assoc_score({5, 5, 5, 5}) < 1e-12); }
  SUBCASE("invalid tables") {
    CHECK_THROWS_AS(assoc_score({-1, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(assoc_score({0, 0, 0, 0}), std::invalid_argument);
  }
}

TEST_CASE("assoc_score agrees with the direct oracle and is symmetric") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const ContingencyTable t{static_cast<std::int64_t>(rng() % 200), static_cast<std::int64_t>(rng() % 2000),
                             static_cast<std::int64_t>(rng() % 2000), static_cast<std::int64_t>(1 + rng() % 100000)};
    const double g = assoc_score(t);
    CHECK(g >= 0.0);
    CHECK(std::abs(g - oracle::g_squared(t.n11, t.n12, t.n21, t.n22)) <= 1e-9);
    CHECK(std::abs(g - assoc_score({t.n11, t.n21, t.n12, t.n22})) <= 1e-9);
    CHECK(std::abs(g - assoc_score({t.n22, t.n21, t.n12, t.n11})) <= 1e-9);
  }
}

TEST_CASE("the critical value corresponds to p = 0.001") {
  CHECK(std::abs(oracle::chi2_survival(kChiSquaredCritical) - 0.001) < 1e-6);
  CHECK(std::abs(oracle::chi2_survival_closed_form(kChiSquaredCritical) - 0.001) < 1e-6);
}

TEST_CASE("collocation statistics") {
  std::vector<std::vector<Token>> docs;
  for (int i = 0; i < 30; ++i) docs.push_back(tokenize("graph theory is useful. cats sleep all day."));
  docs.push_back(tokenize("graph cats theory day"));
  const CollocationStats stats = CollocationStats::build(docs, 2);
  const ContingencyTable t = stats.table("graph", "theory");
  CHECK(t.n11 == 30);
  CHECK(t.total() == stats.total_bigrams());
  CHECK(t.n11 + t.n12 == 31);  // "graph cats" in the last document
  CHECK(stats.significant("graph", "theory"));
  CHECK_FALSE(stats.significant("theory", "graph"));
  CHECK(stats.table("useful", "cats").n11 == 0);  // sentence boundary
  CHECK(stats.significant_set().count("graph theory") == 1);

  const CollocationStats serial = CollocationStats::build(docs, 1);
  CHECK(serial.significant_set() == stats.significant_set());
  CHECK(serial.distinct_bigrams() == stats.distinct_bigrams());
}

TEST_CASE("planted phrases are significant collocations") {
  PlantedCorpusOptions options;
  options.topics = 5;
  options.docs_per_topic = 20;
  const PlantedCorpus pc = planted_corpus(options);
  std::vector<std::vector<Token>> docs;
  for (DocIndex d = 0; d < pc.corpus.size(); ++d) docs.push_back(tokenize(pc.corpus[d].text));
  const CollocationStats stats = CollocationStats::build(docs);
  const Stopwords stop = make_stopwords(pc.stopwords);
  for (const std::string& phrase : pc.phrases) {
    CAPTURE(phrase);
    CHECK(stats.significant_set().count(phrase) == 1);
  }
  const auto tagged = LexiconTagger().tag("x", docs[0]);
  const PhraseSet sig = extract_significant_phrases(tagged, stats, stop);
  bool found = false;
  for (const std::string& phrase : pc.phrases) found = found || sig.count(phrase);
  CHECK(found);
}

TEST_CASE("pre-tagged input") {
  const PreTaggedTagger tagger("d1\t0\tProtein\tNN\nd1\t1\tfolding\tNN\nd1\t2\tAcme\tNNP\n");
  const auto tokens = tokenize("Protein folding Acme rocks");
  const auto tagged = tagger.tag("d1", tokens);
  REQUIRE(tagged.size() == 4);
  CHECK(tagged[0].tag == Tag::kNoun);
  CHECK(tagged[2].tag == Tag::kProperNoun);
  CHECK(tagged[3].tag == Tag::kOther);
  CHECK(tagger.tag("other", tokens)[0].tag == Tag::kOther);
  CHECK_THROWS_AS(PreTaggedTagger("d1\t0\tProtein\n"), ParseError);
  CHECK_THROWS_AS(PreTaggedTagger("d1\tzero\tProtein\tNN\n"), ParseError);
}

}  // TEST_SUITE
