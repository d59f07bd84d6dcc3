#include "topicnet/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

#include "topicnet/graph.h"
#include "topicnet/textprep.h"

namespace topicnet {

namespace {

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Distinct words across phrases; every word tags as NOUN or ADJECTIVE.
const std::vector<std::string>& phrase_inventory() {
  static const std::vector<std::string> phrases = {
      "graph theory",      "protein folding",   "fluid dynamics",    "social psychology",
      "object recognition", "modal analysis",   "human evolution",   "quantum computing",
      "neural networks",   "climate change",    "gene expression",   "dark matter",
      "plate tectonics",   "stem cells",        "solar wind",        "sea ice",
      "speech synthesis",  "volcanic eruptions", "bird migration",   "coral reefs",
      "machine translation", "extremal combinatorics"};
  return phrases;
}

const std::vector<std::string>& noun_pool() {
  static const std::vector<std::string> nouns = {
      "algorithm", "bacteria", "basin",     "beam",      "biomass",   "brain",     "canopy",
      "carbon",    "catalyst", "circuit",   "cloud",     "coast",     "colony",    "compound",
      "crystal",   "current",  "delta",     "density",   "detector",  "diet",      "dust",
      "enzyme",    "fault",    "fiber",     "flame",     "forest",    "fossil",    "frequency",
      "galaxy",    "gas",      "glacier",   "grain",     "habitat",   "harbor",    "hormone",
      "island",    "kernel",   "lake",      "laser",     "lattice",   "leaf",      "lens",
      "magma",     "mantle",   "marsh",     "membrane",  "meteor",    "microbe",   "mirror",
      "molecule",  "muscle",   "nerve",     "nitrogen",  "nucleus",   "orbit",     "oxygen",
      "parasite",  "particle", "pathogen",  "peptide",   "photon",    "pigment",   "planet",
      "plasma",    "pollen",   "polymer",   "pond",      "predator",  "prism",     "pulse",
      "quartz",    "radar",    "rainfall",  "receptor",  "reservoir", "ribosome",  "river",
      "rock",      "root",     "salt",      "satellite", "sediment",  "seed",      "shell",
      "silicon",   "snow",     "soil",      "spectrum",  "sponge",    "spore",     "storm",
      "sugar",     "telescope", "tissue",   "tooth",     "toxin",     "tree",      "tumor",
      "valley",    "vapor",    "vessel",    "virus",     "wave",      "wetland",   "yeast",
      "zinc"};
  return nouns;
}

const std::vector<std::string>& common_nouns() {
  static const std::vector<std::string> nouns = {"project", "data",     "methods", "results",
                                                 "students", "software", "tools",   "workshop",
                                                 "outreach", "samples",  "goals",   "impact"};
  return nouns;
}

const std::vector<std::string>& agencies() {
  static const std::vector<std::string> names = {"NSF", "NASA", "NIH", "NOAA", "USGS", "DOE"};
  return names;
}

// Slots: {c} common noun, {g} group noun, {t} topic noun, {P} agency.
const std::vector<std::string>& filler_templates() {
  static const std::vector<std::string> templates = {
      "The {c} will examine {t} and {g}.",
      "We measure the {t} within each {g}.",
      "This {c} also supports {c}.",
      "Our {c} uses {t} from the {g}.",
      "They compare {t} with {t}.",
      "Funding from {P} supports the {c}.",
      "The research team studies {g} over time.",
      "Each {t} requires {g} and {c}.",
      "Results show that {t} may include {g}.",
      "We collect {t} {t} samples in the field."};
  return templates;
}

// Slot {x} is the phrase, lowercase.
const std::vector<std::string>& mention_templates() {
  static const std::vector<std::string> templates = {
      "We apply {x} to the {t}.",
      "The {c} combines {x} with {g}.",
      "Prior work on {x} shows promise."};
  return templates;
}

struct DocSpec {
  TopicId topic;
  std::size_t phrase;
  std::string year;
};

struct Layout {
  std::size_t topics;
  std::size_t group_size;
  std::size_t mentions;
  double crossover;
  std::uint64_t seed;
  std::vector<std::size_t> phrase_of_topic;
};

template <typename SlotFn>
std::string fill(const std::string& pattern, SlotFn&& slot) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{' && i + 2 < pattern.size() && pattern[i + 2] == '}') {
      out += slot(pattern[i + 1]);
      i += 2;
    } else {
      out += pattern[i];
    }
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

PlantedCorpus build(const std::vector<DocSpec>& specs, const Layout& layout) {
  std::mt19937_64 rng(layout.seed);
  const std::size_t k = layout.topics;
  const std::size_t group_size = std::max<std::size_t>(1, layout.group_size);
  const std::size_t groups = (k + group_size - 1) / group_size;
  const auto& pool = noun_pool();
  auto group_noun = [&](std::size_t g, std::size_t j) { return pool[(g * 2 + j) % pool.size()]; };
  auto topic_noun = [&](TopicId t, std::size_t j) {
    return pool[(groups * 2 + t * 3 + j) % pool.size()];
  };
  auto group_of = [&](TopicId t) { return t / group_size; };

  std::vector<Document> docs;
  std::vector<std::vector<double>> theta_rows;
  std::vector<TopicId> source;
  std::vector<std::size_t> order(specs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  for (std::size_t n = 0; n < order.size(); ++n) {
    const DocSpec& spec = specs[order[n]];
    const TopicId t = spec.topic;
    const std::size_t g = group_of(t);
    const std::string& phrase = phrase_inventory()[spec.phrase];

    auto slot = [&](char c) -> std::string {
      switch (c) {
        case 'c': return common_nouns()[pick(rng, common_nouns().size())];
        case 'g': return group_noun(g, pick(rng, 2));
        case 't': return topic_noun(t, pick(rng, 3));
        case 'P': return agencies()[pick(rng, agencies().size())];
        default: return std::string(1, c);
      }
    };

    std::vector<std::string> sentences;
    sentences.push_back(capitalize(phrase) + " is the focus of this proposal.");
    const std::size_t fillers = 6 + pick(rng, 4);
    std::vector<std::string> body;
    for (std::size_t i = 0; i < fillers; ++i) {
      body.push_back(fill(filler_templates()[pick(rng, filler_templates().size())], slot));
    }
    auto mention = [&](const std::string& x) {
      return fill(mention_templates()[pick(rng, mention_templates().size())],
                  [&](char c) { return c == 'x' ? x : slot(c); });
    };
    for (std::size_t m = 1; m < layout.mentions; ++m) {
      body.insert(body.begin() + static_cast<std::ptrdiff_t>(pick(rng, body.size() + 1)),
                  mention(phrase));
    }
    std::vector<double> theta(k, 0.0);
    const TopicId group_begin = g * group_size;
    const TopicId group_end = std::min(k, group_begin + group_size);
    std::optional<TopicId> sibling;
    if (group_end - group_begin > 1 && unit(rng) < layout.crossover) {
      TopicId s = group_begin + pick(rng, group_end - group_begin - 1);
      if (s >= t) ++s;
      sibling = s;
      body.insert(body.begin() + static_cast<std::ptrdiff_t>(pick(rng, body.size() + 1)),
                  mention(phrase_inventory()[layout.phrase_of_topic[s]]));
    }
    for (std::string& s : body) sentences.push_back(std::move(s));

    std::string text;
    for (const std::string& s : sentences) {
      if (!text.empty()) text += ' ';
      text += s;
    }

    if (k == 1) {
      theta[0] = 1.0;
    } else {
      const double own = 0.55 + 0.1 * unit(rng);
      const std::size_t siblings = group_end - group_begin - 1;
      const std::size_t others = k - siblings - 1;
      const double sibling_mass = siblings == 0 ? 0.0 : (others == 0 ? 1.0 - own : 0.25);
      const double other_mass = 1.0 - own - sibling_mass;
      for (TopicId x = 0; x < k; ++x) {
        if (x == t) {
          theta[x] = own;
        } else if (x >= group_begin && x < group_end) {
          theta[x] = sibling_mass / static_cast<double>(siblings);
        } else {
          theta[x] = other_mass / static_cast<double>(others);
        }
      }
      if (sibling) theta[*sibling] += 0.1;
      double sum = 0.0;
      for (double v : theta) sum += v;
      for (double& v : theta) v /= sum;
    }

    char id[32];
    std::snprintf(id, sizeof id, "doc-%04zu", n);
    docs.push_back({id, std::move(text),
                    {{"year", spec.year}, {"program", "group-" + std::to_string(g)}}});
    theta_rows.push_back(std::move(theta));
    source.push_back(t);
  }

  PlantedCorpus out;
  out.stopwords = default_stopwords();
  const Stopwords stop = make_stopwords(out.stopwords);

  // beta_t(w) proportional to sum_d theta_dt * count_d(w), stopwords removed.
  std::vector<std::map<std::string, double>> counts(docs.size());
  std::set<std::string> terms;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const Token& tok : tokenize(docs[d].text)) {
      if (stop.contains(tok.normalized)) continue;
      counts[d][tok.normalized] += 1.0;
      terms.insert(tok.normalized);
    }
  }
  std::vector<std::string> vocab(terms.begin(), terms.end());
  std::map<std::string, WordId> word_id;
  for (WordId w = 0; w < vocab.size(); ++w) word_id[vocab[w]] = w;

  std::string beta_tsv;
  for (TopicId t = 0; t < k; ++t) {
    std::vector<double> row(vocab.size(), 0.0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (const auto& [term, c] : counts[d]) row[word_id[term]] += theta_rows[d][t] * c;
    }
    double sum = 0.0;
    for (double v : row) sum += v;
    for (WordId w = 0; w < row.size(); ++w) {
      if (row[w] <= 0.0) continue;
      beta_tsv += std::to_string(t) + "\t" + std::to_string(w) + "\t" + format_double(row[w] / sum) +
                  "\n";
    }
  }
  std::string theta_tsv;
  for (std::size_t d = 0; d < theta_rows.size(); ++d) {
    for (TopicId t = 0; t < k; ++t) {
      if (theta_rows[d][t] <= 0.0) continue;
      theta_tsv += std::to_string(d) + "\t" + std::to_string(t) + "\t" +
                   format_double(theta_rows[d][t]) + "\n";
    }
  }

  for (const std::string& w : vocab) out.vocab_txt += w + "\n";
  for (const std::string& w : out.stopwords) out.stopwords_txt += w + "\n";
  out.corpus = Corpus(std::move(docs));
  out.corpus_jsonl = serialize_corpus(out.corpus);
  out.beta_tsv = std::move(beta_tsv);
  out.theta_tsv = std::move(theta_tsv);
  out.model = parse_topic_model(out.beta_tsv, out.theta_tsv, vocab);
  out.source = std::move(source);
  for (TopicId t = 0; t < k; ++t) out.phrases.push_back(phrase_inventory()[layout.phrase_of_topic[t]]);
  return out;
}

}  // namespace

CsrMatrix random_sparse_beta(std::size_t topics, std::size_t vocabulary,
                             std::size_t nonzeros_per_row, std::uint64_t seed,
                             std::size_t groups) {
  if (vocabulary < 2 || nonzeros_per_row == 0 || nonzeros_per_row > vocabulary / 2) {
    throw std::invalid_argument("random_sparse_beta: bad shape");
  }
  groups = std::max<std::size_t>(1, groups);
  std::mt19937_64 rng(seed);
  const std::size_t background = vocabulary / 2;
  const std::size_t block = std::max<std::size_t>(1, (vocabulary - background) / groups);

  std::vector<std::size_t> offsets{0};
  std::vector<SparseEntry> entries;
  for (TopicId t = 0; t < topics; ++t) {
    const std::size_t g = t % groups;
    const std::size_t block_begin = background + g * block;
    const std::size_t block_size = std::min(block, vocabulary - block_begin);
    const std::size_t from_block = std::min(nonzeros_per_row / 2, block_size);
    std::set<std::size_t> cols;
    while (cols.size() < from_block) cols.insert(block_begin + pick(rng, block_size));
    while (cols.size() < nonzeros_per_row) {
      const double u = unit(rng);
      cols.insert(static_cast<std::size_t>(static_cast<double>(background) * u * u));
    }
    std::vector<SparseEntry> row;
    double sum = 0.0;
    for (std::size_t c : cols) {
      // Exponential weights, skewed toward low (frequent) columns.
      const double w = -std::log1p(-unit(rng)) / (1.0 + 0.01 * static_cast<double>(c % 100));
      const double v = std::max(w, 1e-3);
      row.push_back({c, v});
      sum += v;
    }
    for (SparseEntry& e : row) e.value /= sum;
    entries.insert(entries.end(), row.begin(), row.end());
    offsets.push_back(entries.size());
  }
  return CsrMatrix(vocabulary, std::move(offsets), std::move(entries));
}

std::string beta_to_tsv(const CsrMatrix& beta) {
  std::string out;
  for (std::size_t r = 0; r < beta.rows(); ++r) {
    for (const SparseEntry& e : beta.row(r)) {
      out += std::to_string(r) + "\t" + std::to_string(e.column) + "\t" + format_double(e.value) +
             "\n";
    }
  }
  return out;
}

std::string theta_to_tsv(const DenseMatrix& theta) {
  std::string out;
  for (std::size_t r = 0; r < theta.rows(); ++r) {
    for (std::size_t c = 0; c < theta.cols(); ++c) {
      if (theta(r, c) <= 0.0) continue;
      out += std::to_string(r) + "\t" + std::to_string(c) + "\t" + format_double(theta(r, c)) +
             "\n";
    }
  }
  return out;
}

std::size_t planted_phrase_capacity() { return phrase_inventory().size(); }

PlantedCorpus planted_corpus(const PlantedCorpusOptions& options) {
  if (options.topics == 0 || options.topics > planted_phrase_capacity()) {
    throw std::invalid_argument("planted_corpus: topic count outside phrase inventory");
  }
  if (options.mentions == 0) throw std::invalid_argument("planted_corpus: mentions must be >= 1");
  Layout layout{options.topics, options.group_size, options.mentions, options.crossover,
                options.seed, {}};
  for (TopicId t = 0; t < options.topics; ++t) layout.phrase_of_topic.push_back(t);
  std::mt19937_64 years(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<DocSpec> specs;
  for (TopicId t = 0; t < options.topics; ++t) {
    for (std::size_t i = 0; i < options.docs_per_topic; ++i) {
      specs.push_back({t, t, std::to_string(1999 + pick(years, 5))});
    }
  }
  return build(specs, layout);
}

PlantedCorpus relabel_fixture() {
  const std::size_t extremal = phrase_inventory().size() - 1;
  Layout layout{3, 1, 3, 0.0, 7, {0, 1, 2}};
  std::vector<DocSpec> specs;
  for (int i = 0; i < 6; ++i) specs.push_back({0, 0, "1999"});
  for (int i = 0; i < 4; ++i) specs.push_back({0, extremal, "2000"});
  for (TopicId t = 1; t < 3; ++t) {
    for (int i = 0; i < 8; ++i) specs.push_back({t, t, i % 2 == 0 ? "1999" : "2000"});
  }
  return build(specs, layout);
}

}  // namespace topicnet
