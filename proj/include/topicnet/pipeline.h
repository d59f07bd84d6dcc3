#ifndef TOPICNET_PIPELINE_H_
#define TOPICNET_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topicnet/core_model.h"
#include "topicnet/graph.h"
#include "topicnet/labeling.h"
#include "topicnet/service.h"
#include "topicnet/similarity.h"

namespace topicnet {

/// Bad flag combination; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage failed; carries the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause, bool validation)
      : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)),
        validation_(validation) {}
  const std::string& stage() const { return stage_; }
  /// The cause was invalid input rather than a runtime failure.
  bool validation() const { return validation_; }

 private:
  std::string stage_;
  bool validation_;
};

inline constexpr double kDefaultTargetDensity = 0.01;
inline constexpr std::size_t kDefaultCandidates = 5;
inline constexpr std::size_t kDefaultLabels = 1;

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path beta;
  std::filesystem::path theta;
  std::filesystem::path vocab;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> pretagged;
  std::filesystem::path out;

  std::optional<double> xi;
  std::optional<double> target_density;
  std::optional<std::size_t> candidates;
  std::optional<std::size_t> labels;
  std::optional<std::uint64_t> seed;
  std::vector<ExportFormat> formats;
  std::optional<std::size_t> workers;

  /// Checks invariants and fills defaults, recording each one applied.
  /// Throws ConfigError.
  void resolve();

  std::vector<std::string> defaults_applied;
};

enum class Stage { kNetwork, kCommunities, kLabels };

/// What a subcommand computes and writes.
struct StageSet {
  bool communities = true;
  bool labels = true;
  bool write_similarity = true;
  bool write_graph = true;
  bool write_labels = true;
  bool write_report = true;

  static StageSet everything() { return {}; }
};

/// In-memory results of a pipeline run.
struct PipelineState {
  TopicModel model;
  TopicAssignment assignment;
  SimilarityMatrix similarities;
  ThresholdSelection threshold;
  bool xi_from_density = false;
  TopicGraph graph;
  std::optional<LouvainResult> communities;
  std::vector<std::vector<TopicId>> components;

  std::optional<Corpus> corpus;
  std::shared_ptr<const AnalyzedCorpus> analyzed;
  std::vector<LabelResult> labels;
  std::vector<std::vector<std::string>> baseline;

  std::vector<std::string> warnings;
};

/// Loads inputs and runs the requested stages without touching disk
/// outputs. Throws StageError.
PipelineState compute_pipeline(const PipelineConfig& config, const StageSet& stages);

/// Runs the stages and writes the artifact bundle plus manifest.json into
/// config.out. Files are staged and moved into place only on success.
/// Returns the manifest.
nlohmann::json run_pipeline(PipelineConfig config, const StageSet& stages = StageSet::everything());

/// `topic_id\trank\tlabel\tig\tfinal_score`.
std::string label_report(const std::vector<LabelResult>& labels);
/// `topic_id\tdocsetlabeler_labels\tlda_labels`.
std::string baseline_report(const std::vector<LabelResult>& labels,
                            const std::vector<std::vector<std::string>>& baseline);

/// Session over a computed state (requires the labels stage).
std::shared_ptr<Session> make_session(PipelineState state, const PipelineConfig& config);

}  // namespace topicnet

#endif  // TOPICNET_PIPELINE_H_
