#ifndef TOPICNET_SIMILARITY_H_
#define TOPICNET_SIMILARITY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "topicnet/core_model.h"
#include "topicnet/graph.h"

namespace topicnet {

/// Symmetric K x K matrix of Hellinger similarities with unit diagonal.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t k);

  std::size_t size() const { return k_; }
  double operator()(TopicId x, TopicId y) const { return values_[x * k_ + y]; }
  /// Sets both (x, y) and (y, x).
  void set(TopicId x, TopicId y, double value);

  /// Off-diagonal values of the upper triangle, row-major (x < y).
  std::vector<double> upper_triangle() const;

 private:
  std::size_t k_ = 0;
  std::vector<double> values_;
};

/// 1 - sqrt(sum (sqrt(p_i) - sqrt(q_i))^2) / sqrt(2), clamped to [0, 1].
/// Throws std::invalid_argument on dimension mismatch.
double hellinger_similarity(std::span<const double> p, std::span<const double> q);

/// Sparse-row variant; rows must have strictly increasing columns.
double hellinger_similarity(std::span<const SparseEntry> p, std::span<const SparseEntry> q);

/// All pairs of beta rows, parallelized over rows. workers == 0 picks the
/// hardware concurrency.
SimilarityMatrix pairwise_similarities(const CsrMatrix& beta, std::size_t workers = 0);

// --- map/reduce decomposition -------------------------------------------

struct ColumnEntry {
  TopicId topic;
  double value;
};

struct TopicPair {
  TopicId x;  // x < y
  TopicId y;

  bool operator==(const TopicPair&) const = default;
};

struct PairContribution {
  TopicPair pair;
  double value;
};

/// Emits e_i = (sqrt(b_xi) - sqrt(b_yi))^2 for every unordered topic pair with
/// at least one nonzero side in this word column. Topics absent from the
/// column are treated as 0; pairs absent on both sides are not emitted.
/// Output is ordered by (x, y). Throws std::invalid_argument on duplicate
/// topics or topic ids >= num_topics.
std::vector<PairContribution> map_emit(std::span<const ColumnEntry> column,
                                       std::size_t num_topics);

/// 1 - sqrt(sum e_i) / sqrt(2), clamped. Throws std::invalid_argument on a
/// negative contribution.
double reduce_pair(std::span<const double> contributions);

/// Full similarity matrix via column grouping, map_emit over columns, a
/// shuffle by pair key and reduce_pair per pair.
SimilarityMatrix map_reduce_similarities(const CsrMatrix& beta, std::size_t workers = 0);

// --- thresholding ---------------------------------------------------------

struct ThresholdSelection {
  double xi = 0.0;
  std::size_t edge_count = 0;
  double density = 0.0;
  /// Set when no pair survives the chosen threshold.
  bool empty_graph = false;
};

/// Smallest off-diagonal similarity v with |{pairs > v}| / (K(K-1)/2) <=
/// target_density. A target of 1 keeps every pair. Throws
/// std::invalid_argument for K < 2 or a target outside (0, 1].
ThresholdSelection select_threshold(const SimilarityMatrix& sims, double target_density);

/// Edges with similarity strictly greater than xi, ordered by (x, y).
EdgeList threshold_edges(const SimilarityMatrix& sims, double xi);

/// One node per topic sized by assigned documents; edges above xi.
TopicGraph build_network(const SimilarityMatrix& sims, double xi,
                         const TopicAssignment& assignment);

/// `x\ty\tsimilarity` for x < y.
std::string similarity_tsv(const SimilarityMatrix& sims);

}  // namespace topicnet

#endif  // TOPICNET_SIMILARITY_H_
