// Command-line driver: builds topic networks, labels topics and serves the
// result over HTTP.

#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "topicnet/pipeline.h"
#include "topicnet/service.h"

namespace {

using topicnet::ConfigError;
using topicnet::PipelineConfig;
using topicnet::StageSet;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Flags {
  std::string corpus, beta, theta, vocab, stopwords, pretagged, out;
  std::optional<double> xi, target_density;
  std::optional<std::size_t> candidates, labels, workers;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> formats;
  std::string serve_addr = "127.0.0.1:8080";
};

void add_common(CLI::App& cmd, Flags& f, bool needs_out) {
  cmd.add_option("--corpus", f.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  cmd.add_option("--beta", f.beta, "Topic-word triplets TSV")->required()->check(CLI::ExistingFile);
  cmd.add_option("--theta", f.theta, "Document-topic triplets TSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--vocab", f.vocab, "Vocabulary, one term per line")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--stopwords", f.stopwords, "Stopword list (default: built-in)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--pretagged", f.pretagged, "Pre-tagged tokens TSV from an external tagger")
      ->check(CLI::ExistingFile);
  cmd.add_option("--xi", f.xi, "Similarity threshold");
  cmd.add_option("--target-density", f.target_density, "Graph density used to pick xi");
  cmd.add_option("--candidates,-C", f.candidates, "Candidates per document and label pool (C)");
  cmd.add_option("--labels,-L", f.labels, "Labels per topic (L)");
  cmd.add_option("--seed", f.seed, "Louvain seed");
  cmd.add_option("--format", f.formats, "Graph export formats: gexf, graphml, json")
      ->delimiter(',');
  cmd.add_option("--workers", f.workers, "Worker threads (0 = all cores)");
  auto* out = cmd.add_option("--out", f.out, "Output directory");
  if (needs_out) out->required();
}

PipelineConfig to_config(const Flags& f) {
  PipelineConfig config;
  config.corpus = f.corpus;
  config.beta = f.beta;
  config.theta = f.theta;
  config.vocab = f.vocab;
  if (!f.stopwords.empty()) config.stopwords = f.stopwords;
  if (!f.pretagged.empty()) config.pretagged = f.pretagged;
  config.out = f.out;
  config.xi = f.xi;
  config.target_density = f.target_density;
  config.candidates = f.candidates;
  config.labels = f.labels;
  config.seed = f.seed;
  config.workers = f.workers;
  for (const std::string& name : f.formats) {
    try {
      config.formats.push_back(topicnet::parse_export_format(name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return config;
}

int serve(const Flags& flags) {
  PipelineConfig config = to_config(flags);
  config.resolve();
  const auto colon = flags.serve_addr.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--serve-addr must be host:port");
  const std::string host = flags.serve_addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(flags.serve_addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("--serve-addr has a bad port");
  }

  // Block termination signals before any thread starts; a watcher thread
  // turns them into a clean server stop.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto state = topicnet::compute_pipeline(config, StageSet::everything());
  for (const std::string& w : state.warnings) std::cerr << "warning: " << w << "\n";
  topicnet::ServiceApp app(topicnet::make_session(std::move(state), config));
  topicnet::HttpServer server(app);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << flags.serve_addr << "\n";
    return kExitRuntime;
  }
  std::cerr << "listening on " << host << ":" << bound << "\n";
  std::jthread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // Wake the watcher if the server stopped on its own.
  pthread_kill(watcher.native_handle(), SIGTERM);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic similarity networks with document-set labels"};
  app.require_subcommand(1);

  Flags flags;
  struct Command {
    const char* name;
    const char* help;
    StageSet stages;
  };
  const Command commands[] = {
      {"run", "Every stage and every artifact",
       StageSet::everything()},
      {"build-network", "Similarity matrix and thresholded graph",
       {.communities = false, .labels = false, .write_labels = false, .write_report = false}},
      {"communities", "Network plus Louvain communities",
       {.communities = true, .labels = false, .write_labels = false, .write_report = false}},
      {"label", "Topic labels",
       {.communities = false, .labels = true, .write_similarity = false, .write_graph = false,
        .write_labels = true, .write_report = false}},
      {"export", "Labeled, community-colored graph exports",
       {.communities = true, .labels = true, .write_similarity = false, .write_graph = true,
        .write_labels = false, .write_report = false}},
      {"report", "Labels side by side with the top-word baseline",
       {.communities = false, .labels = true, .write_similarity = false, .write_graph = false,
        .write_labels = true, .write_report = true}},
  };
  std::vector<std::pair<CLI::App*, StageSet>> batch;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(*sub, flags, true);
    batch.emplace_back(sub, c.stages);
  }
  CLI::App* serve_cmd = app.add_subcommand("serve", "Build everything in memory and serve it");
  add_common(*serve_cmd, flags, false);
  serve_cmd->add_option("--serve-addr", flags.serve_addr, "host:port (port 0 picks one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (serve_cmd->parsed()) return serve(flags);
    for (const auto& [sub, stages] : batch) {
      if (!sub->parsed()) continue;
      const nlohmann::json manifest = topicnet::run_pipeline(to_config(flags), stages);
      for (const auto& w : manifest["warnings"]) {
        std::cerr << "warning: " << w.get<std::string>() << "\n";
      }
      std::cout << manifest["outputs"].dump(2) << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const topicnet::StageError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return e.validation() ? kExitValidation : kExitRuntime;
  } catch (const topicnet::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const topicnet::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
