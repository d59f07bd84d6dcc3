#include "topicnet/pipeline.h"

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "topicnet/hash.h"
#include "topicnet/parallel.h"
#include "topicnet/textprep.h"

namespace topicnet {

namespace {

using nlohmann::json;

// Runs one stage, tagging any failure with the stage name.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ParseError& e) {
    throw StageError(name, e.what(), true);
  } catch (const ValidationError& e) {
    throw StageError(name, e.what(), true);
  } catch (const std::out_of_range& e) {
    throw StageError(name, e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), false);
  }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

std::string format_list(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

void PipelineConfig::resolve() {
  if (xi && target_density) throw ConfigError("--xi and --target-density are mutually exclusive");
  if (xi && !(*xi >= 0.0 && *xi < 1.0)) throw ConfigError("--xi must lie in [0, 1)");
  if (target_density && !(*target_density > 0.0 && *target_density <= 1.0)) {
    throw ConfigError("--target-density must lie in (0, 1]");
  }
  if (!xi && !target_density) {
    target_density = kDefaultTargetDensity;
    defaults_applied.push_back("target_density");
  }
  if (!candidates) {
    candidates = kDefaultCandidates;
    defaults_applied.push_back("candidates");
  }
  if (!labels) {
    labels = kDefaultLabels;
    defaults_applied.push_back("labels");
  }
  if (*labels < 1 || *candidates < *labels) throw ConfigError("need C >= L >= 1");
  if (!seed) {
    seed = 0;
    defaults_applied.push_back("seed");
  }
  if (formats.empty()) {
    formats = {ExportFormat::kGexf, ExportFormat::kGraphml, ExportFormat::kJson};
    defaults_applied.push_back("formats");
  }
  if (!workers) {
    workers = 0;
    defaults_applied.push_back("workers");
  }
  if (!stopwords) defaults_applied.push_back("stopwords");
}

PipelineState compute_pipeline(const PipelineConfig& config, const StageSet& stages) {
  PipelineState state;
  const std::size_t workers = config.workers.value_or(0);

  state.model = stage("load-model", [&] {
    return load_topic_model(config.beta, config.theta, config.vocab);
  });
  state.assignment = stage("assign-clusters", [&] { return assign_clusters(state.model); });

  state.similarities = stage("similarity", [&] {
    return pairwise_similarities(state.model.beta(), workers);
  });
  stage("threshold", [&] {
    if (config.xi) {
      state.threshold.xi = *config.xi;
    } else {
      if (state.model.num_topics() < 2) throw ValidationError("need at least 2 topics");
      state.threshold = select_threshold(state.similarities, *config.target_density);
      state.xi_from_density = true;
    }
  });
  state.graph = stage("network", [&] {
    return build_network(state.similarities, state.threshold.xi, state.assignment);
  });
  state.threshold.edge_count = state.graph.num_edges();
  state.threshold.density = state.graph.density();
  state.threshold.empty_graph = state.graph.num_edges() == 0;
  if (state.threshold.empty_graph) {
    state.warnings.push_back("threshold " + format_double(state.threshold.xi) +
                             " leaves the graph without edges");
  }
  state.components = connected_components(state.graph);

  if (stages.communities) {
    state.communities = stage("communities", [&] {
      return louvain_detailed(state.graph, LouvainOptions{*config.seed});
    });
    apply_partition(state.graph, state.communities->partition);
  }

  if (stages.labels) {
    state.corpus = stage("load-corpus", [&] { return load_corpus(config.corpus); });
    if (state.corpus->size() != state.model.num_documents()) {
      throw StageError("load-corpus",
                       "corpus has " + std::to_string(state.corpus->size()) +
                           " documents but theta has " +
                           std::to_string(state.model.num_documents()) + " rows",
                       true);
    }
    state.analyzed = stage("textprep", [&] {
      std::vector<std::string> words =
          config.stopwords ? load_term_list(*config.stopwords) : default_stopwords();
      std::unique_ptr<Tagger> tagger;
      if (config.pretagged) {
        tagger = std::make_unique<PreTaggedTagger>(read_file(*config.pretagged));
      } else {
        tagger = std::make_unique<LexiconTagger>();
      }
      return std::make_shared<const AnalyzedCorpus>(
          AnalyzedCorpus::build(*state.corpus, *tagger, make_stopwords(words), workers));
    });
    stage("labeling", [&] {
      DocSetLabeler labeler(state.analyzed, workers);
      const LabelOptions options{*config.candidates, *config.labels};
      const std::size_t k = state.model.num_topics();
      state.labels.assign(k, {});
      state.baseline.assign(k, {});
      labeler.candidates(options.candidates);
      std::vector<DocIndex> all(state.corpus->size());
      for (DocIndex i = 0; i < all.size(); ++i) all[i] = i;
      parallel_for(k, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (TopicId t = begin; t < end; ++t) {
          const auto docs = state.assignment.documents_of(t);
          state.baseline[t] = lda_baseline_labels(state.model.beta().row(t),
                                                  state.model.vocabulary(), options.labels);
          if (docs.empty()) continue;
          state.labels[t] = labeler.label(docs, all, state.model.vocabulary(),
                                          state.model.beta().row(t), options);
        }
      });
      for (TopicId t = 0; t < k; ++t) {
        if (state.assignment.doc_counts[t] == 0) {
          state.warnings.push_back("topic " + std::to_string(t) + " has no documents");
        } else if (state.labels[t].degenerate) {
          state.warnings.push_back("topic " + std::to_string(t) +
                                   " covers every document; labels ordered by re-sort only");
        }
        const auto& top = state.labels[t].labels;
        state.graph.set_label(t, top.empty() ? std::string() : top.front().display);
      }
    });
  }
  return state;
}

std::string label_report(const std::vector<LabelResult>& labels) {
  std::string out = "topic_id\trank\tlabel\tig\tfinal_score\n";
  for (TopicId t = 0; t < labels.size(); ++t) {
    for (std::size_t r = 0; r < labels[t].labels.size(); ++r) {
      const CandidateLabel& c = labels[t].labels[r];
      out += std::to_string(t) + "\t" + std::to_string(r + 1) + "\t" + c.display + "\t" +
             format_double(c.ig) + "\t" + format_double(c.final_score) + "\n";
    }
  }
  return out;
}

std::string baseline_report(const std::vector<LabelResult>& labels,
                            const std::vector<std::vector<std::string>>& baseline) {
  std::string out = "topic_id\tdocsetlabeler_labels\tlda_labels\n";
  for (TopicId t = 0; t < baseline.size(); ++t) {
    std::vector<std::string> ours;
    if (t < labels.size()) {
      for (const CandidateLabel& c : labels[t].labels) ours.push_back(c.display);
    }
    out += std::to_string(t) + "\t" + format_list(ours) + "\t" + format_list(baseline[t]) + "\n";
  }
  return out;
}

json run_pipeline(PipelineConfig config, const StageSet& stages) {
  config.resolve();
  PipelineState state = compute_pipeline(config, stages);

  std::map<std::string, std::string> files;
  if (stages.write_similarity) files["similarity.tsv"] = similarity_tsv(state.similarities);
  if (stages.write_graph) {
    for (ExportFormat f : config.formats) {
      files["graph." + std::string(format_extension(f))] = export_graph(state.graph, f);
    }
    std::string components = "topic_id\tcomponent\tcommunity\n";
    std::vector<std::size_t> component_of(state.graph.num_nodes());
    for (std::size_t c = 0; c < state.components.size(); ++c) {
      for (TopicId t : state.components[c]) component_of[t] = c;
    }
    for (const TopicNode& node : state.graph.nodes()) {
      components += std::to_string(node.topic) + "\t" + std::to_string(component_of[node.topic]) +
                    "\t" + std::to_string(node.community) + "\n";
    }
    files["communities.tsv"] = components;
  }
  if (stages.labels && stages.write_labels) files["labels.tsv"] = label_report(state.labels);
  if (stages.labels && stages.write_report) {
    files["report.tsv"] = baseline_report(state.labels, state.baseline);
  }

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["parameters"] = {
      {"xi", config.xi ? json(*config.xi) : json(nullptr)},
      {"target_density", config.target_density ? json(*config.target_density) : json(nullptr)},
      {"candidates", *config.candidates},
      {"labels", *config.labels},
      {"seed", *config.seed},
      {"workers", *config.workers == 0 ? json("auto") : json(*config.workers)},
      {"stopwords", config.stopwords ? json(config.stopwords->string()) : json("builtin")},
      {"tagger", config.pretagged ? "pretagged" : "lexicon"}};
  json formats = json::array();
  for (ExportFormat f : config.formats) formats.push_back(format_extension(f));
  manifest["parameters"]["formats"] = formats;
  manifest["defaults_applied"] = config.defaults_applied;

  json inputs;
  auto hash_input = [&](const std::string& name, const std::filesystem::path& path) {
    inputs[name] = {{"path", path.string()}, {"sha256", sha256_hex(read_file(path))}};
  };
  hash_input("beta", config.beta);
  hash_input("theta", config.theta);
  hash_input("vocab", config.vocab);
  if (stages.labels) hash_input("corpus", config.corpus);
  if (stages.labels && config.stopwords) hash_input("stopwords", *config.stopwords);
  if (stages.labels && config.pretagged) hash_input("pretagged", *config.pretagged);
  manifest["inputs"] = inputs;

  manifest["model"] = {{"num_topics", state.model.num_topics()},
                       {"num_documents", state.model.num_documents()},
                       {"vocabulary_size", state.model.vocabulary().size()},
                       {"beta_nonzeros", state.model.beta().nonzeros()}};
  manifest["network"] = {{"xi", state.threshold.xi},
                         {"xi_source", state.xi_from_density ? "target_density" : "manual"},
                         {"edges", state.graph.num_edges()},
                         {"density", state.graph.density()},
                         {"empty_graph", state.threshold.empty_graph},
                         {"components", state.components.size()}};
  if (state.communities) {
    manifest["communities"] = {{"count", state.communities->partition.community_count},
                               {"modularity", state.communities->modularity},
                               {"passes", state.communities->modularity_trace.size() - 1}};
  }
  manifest["warnings"] = state.warnings;
  json outputs;
  for (const auto& [name, content] : files) outputs[name] = sha256_hex(content);
  manifest["outputs"] = outputs;
  files["manifest.json"] = manifest.dump(2) + "\n";

  stage("write", [&] {
    std::filesystem::create_directories(config.out);
    const std::filesystem::path staging =
        config.out / (".staging-" + std::to_string(::getpid()));
    std::filesystem::remove_all(staging);
    std::filesystem::create_directories(staging);
    try {
      for (const auto& [name, content] : files) write_text(staging / name, content);
      for (const auto& [name, content] : files) {
        std::filesystem::rename(staging / name, config.out / name);
      }
    } catch (...) {
      std::filesystem::remove_all(staging);
      throw;
    }
    std::filesystem::remove_all(staging);
  });
  return manifest;
}

std::shared_ptr<Session> make_session(PipelineState state, const PipelineConfig& config) {
  if (!state.corpus || !state.analyzed) {
    throw std::invalid_argument("make_session: labels stage was not run");
  }
  SessionArtifacts artifacts{std::move(*state.corpus), std::move(state.model),
                             std::move(state.assignment), std::move(state.graph),
                             std::move(state.analyzed), state.threshold.xi};
  return std::make_shared<Session>(
      std::move(artifacts),
      LabelOptions{config.candidates.value_or(kDefaultCandidates),
                   config.labels.value_or(kDefaultLabels)},
      config.workers.value_or(0));
}

}  // namespace topicnet
