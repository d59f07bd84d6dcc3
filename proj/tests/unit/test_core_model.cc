#include <doctest.h>

#include <cmath>
#include <random>

#include "topicnet/core_model.h"

using namespace topicnet;

TEST_SUITE("core_model") {

TEST_CASE("empty corpus file parses to zero documents") {
  CHECK(parse_corpus("").size() == 0);
}

TEST_CASE("corpus keeps file order and defaults facets to empty") {
  const Corpus c = parse_corpus(
      "{\"id\":\"b\",\"text\":\"two\"}\n"
      "{\"id\":\"a\",\"text\":\"one\",\"facets\":{\"year\":\"1999\"}}\n"
      "{\"id\":\"c\",\"text\":\"three\"}\n");
  REQUIRE(c.size() == 3);
  CHECK(c[0].id == "b");
  CHECK(c[1].id == "a");
  CHECK(c[2].id == "c");
  CHECK(c[0].facets.empty());
  CHECK(c[1].facets.at("year") == "1999");
  CHECK(c.find("a") == 1);
  CHECK(c.find("zzz") == c.size());
}

TEST_CASE("corpus line missing text reports its line number") {
  try {
    parse_corpus("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\"}\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_corpus("not json\n"), ParseError);
}

TEST_CASE("duplicate document ids are rejected") {
  CHECK_THROWS_AS(parse_corpus("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n"),
                  ValidationError);
}

TEST_CASE("corpus round trip preserves ids, texts and facets") {
  const Corpus c = parse_corpus(
      "{\"id\":\"d1\",\"text\":\"Graph theory, again.\",\"facets\":{\"year\":\"2000\",\"p\":\"x\"}}\n"
      "{\"id\":\"d2\",\"text\":\"caf\\u00e9 \\\"quoted\\\"\"}\n");
  const Corpus back = parse_corpus(serialize_corpus(c));
  REQUIRE(back.size() == c.size());
  for (DocIndex i = 0; i < c.size(); ++i) {
    CHECK(back[i].id == c[i].id);
    CHECK(back[i].text == c[i].text);
    CHECK(back[i].facets == c[i].facets);
  }
}

TEST_CASE("singleton topic model") {
  const TopicModel m = parse_topic_model("0\t0\t1.0\n", "0\t0\t1.0\n", {"graph"});
  CHECK(m.num_topics() == 1);
  CHECK(m.num_documents() == 1);
  CHECK(m.beta().at(0, 0) == 1.0);
}

TEST_CASE("beta row summing to 0.9 is rejected") {
  CHECK_THROWS_AS(parse_topic_model("0\t0\t0.5\n0\t1\t0.4\n", "0\t0\t1\n", {"a", "b"}),
                  ValidationError);
}

TEST_CASE("beta row summing to 1.00005 is renormalized") {
  const TopicModel m =
      parse_topic_model("0\t0\t0.50005\n0\t1\t0.5\n", "0\t0\t1\n", {"a", "b"});
  double sum = 0.0;
  for (const SparseEntry& e : m.beta().row(0)) sum += e.value;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  CHECK(m.beta().at(0, 0) == doctest::Approx(0.50005 / 1.00005).epsilon(1e-14));
}

TEST_CASE("theta rows are validated too") {
  CHECK_THROWS_AS(parse_topic_model("0\t0\t1\n1\t0\t1\n", "0\t0\t0.3\n0\t1\t0.3\n", {"a"}),
                  ValidationError);
}

TEST_CASE("word id outside the vocabulary is an index error") {
  CHECK_THROWS_AS(parse_topic_model("0\t5\t1.0\n", "0\t0\t1\n", {"a", "b"}), std::out_of_range);
}

TEST_CASE("malformed and duplicate triplets") {
  CHECK_THROWS_AS(parse_topic_model("0\t0\n", "0\t0\t1\n", {"a"}), ParseError);
  CHECK_THROWS_AS(parse_topic_model("0\tx\t1\n", "0\t0\t1\n", {"a"}), ParseError);
  CHECK_THROWS_AS(parse_topic_model("0\t0\t0.5\n0\t0\t0.5\n", "0\t0\t1\n", {"a"}),
                  ValidationError);
  CHECK_THROWS_AS(parse_topic_model("0\t0\t-1\n", "0\t0\t1\n", {"a"}), ValidationError);
}

TEST_CASE("tiny beta entries are dropped and the row renormalized") {
  const TopicModel m = parse_topic_model("0\t0\t1.0\n0\t1\t1e-12\n", "0\t0\t1\n", {"a", "b"});
  CHECK(m.beta().row(0).size() == 1);
  CHECK(m.beta().at(0, 1) == 0.0);
}

TEST_CASE("duplicate vocabulary terms are rejected") {
  CHECK_THROWS_AS(Vocabulary({"a", "b", "a"}), ValidationError);
  const Vocabulary v({"x", "y"});
  CHECK(v.find("y") == 1);
  CHECK(v.find("z") == v.size());
}

TEST_CASE("argmax clustering examples") {
  SUBCASE("unique argmax") {
    const TopicModel m = parse_topic_model("0\t0\t1\n1\t0\t1\n2\t0\t1\n",
                                           "0\t0\t0.1\n0\t1\t0.7\n0\t2\t0.2\n", {"w"});
    CHECK(assign_clusters(m).cluster_of[0] == 1);
  }
  SUBCASE("ties go to the lowest topic") {
    const TopicModel m = parse_topic_model("0\t0\t1\n1\t0\t1\n", "0\t0\t0.5\n0\t1\t0.5\n", {"w"});
    CHECK(assign_clusters(m).cluster_of[0] == 0);
  }
  SUBCASE("counting") {
    const TopicModel m = parse_topic_model("0\t0\t1\n1\t0\t1\n2\t0\t1\n",
                                           "0\t2\t1\n1\t2\t1\n2\t2\t1\n", {"w"});
    const TopicAssignment a = assign_clusters(m);
    CHECK(a.doc_counts == std::vector<std::size_t>{0, 0, 3});
    CHECK(a.documents_of(2) == std::vector<DocIndex>{0, 1, 2});
  }
}

TEST_CASE("argmax property and count conservation on random theta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 200, k = 7;
  std::string theta;
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<double> row(k);
    double sum = 0;
    for (double& v : row) sum += v = std::floor(u(rng) * 4.0);  // coarse values force ties
    if (sum == 0) row[3] = sum = 1;
    for (std::size_t t = 0; t < k; ++t) {
      if (row[t] > 0) theta += std::to_string(d) + "\t" + std::to_string(t) + "\t" +
                               std::to_string(row[t] / sum) + "\n";
    }
  }
  std::string beta;
  for (std::size_t t = 0; t < k; ++t) beta += std::to_string(t) + "\t0\t1\n";
  const TopicModel m = parse_topic_model(beta, theta, {"w"});
  const TopicAssignment a = assign_clusters(m);
  std::size_t total = 0;
  for (std::size_t c : a.doc_counts) total += c;
  CHECK(total == n);
  for (DocIndex d = 0; d < n; ++d) {
    const auto row = m.theta().row(d);
    for (TopicId t = 0; t < k; ++t) {
      CHECK(row[a.cluster_of[d]] >= row[t]);
      if (t < a.cluster_of[d]) CHECK(row[t] < row[a.cluster_of[d]]);
    }
  }
}

}  // TEST_SUITE
