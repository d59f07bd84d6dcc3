// Writes the bundled mini-corpus (500 documents, 20 topics in 5 groups).
// Usage: make_mini_corpus <out-dir>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "topicnet/synthetic.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_mini_corpus <out-dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  topicnet::PlantedCorpusOptions options;
  options.topics = 20;
  options.docs_per_topic = 25;
  options.group_size = 4;
  options.crossover = 0.2;
  options.seed = 2024;
  const topicnet::PlantedCorpus mini = topicnet::planted_corpus(options);

  const std::pair<const char*, const std::string*> files[] = {
      {"corpus.jsonl", &mini.corpus_jsonl}, {"beta.tsv", &mini.beta_tsv},
      {"theta.tsv", &mini.theta_tsv},       {"vocab.txt", &mini.vocab_txt},
      {"stopwords.txt", &mini.stopwords_txt}};
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << *content;
    if (!out) {
      std::cerr << "cannot write " << (dir / name) << "\n";
      return 2;
    }
  }
  std::cout << "wrote " << mini.corpus.size() << " documents, " << mini.model.num_topics()
            << " topics, " << mini.model.vocabulary().size() << " terms to " << dir << "\n";
  return 0;
}
