#include "topicnet/similarity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "topicnet/parallel.h"

namespace topicnet {

namespace {

// Neumaier compensated sum; the direct and map/reduce paths both accumulate
// through it in word order so they agree to rounding.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double squared_root_difference(double a, double b) {
  if (a == 0.0) return b;
  if (b == 0.0) return a;
  double d = std::sqrt(a) - std::sqrt(b);
  return d * d;
}

double similarity_from_distance_sum(double sum) {
  double s = 1.0 - std::sqrt(std::max(sum, 0.0)) / std::numbers::sqrt2;
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t k) : k_(k), values_(k * k, 0.0) {
  for (std::size_t i = 0; i < k; ++i) values_[i * k + i] = 1.0;
}

void SimilarityMatrix::set(TopicId x, TopicId y, double value) {
  values_[x * k_ + y] = value;
  values_[y * k_ + x] = value;
}

std::vector<double> SimilarityMatrix::upper_triangle() const {
  std::vector<double> out;
  out.reserve(k_ < 2 ? 0 : k_ * (k_ - 1) / 2);
  for (std::size_t x = 0; x < k_; ++x) {
    for (std::size_t y = x + 1; y < k_; ++y) out.push_back(values_[x * k_ + y]);
  }
  return out;
}

double hellinger_similarity(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("hellinger_similarity: dimension mismatch (" +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0 && q[i] == 0.0) continue;
    sum.add(squared_root_difference(p[i], q[i]));
  }
  return similarity_from_distance_sum(sum.value());
}

double hellinger_similarity(std::span<const SparseEntry> p, std::span<const SparseEntry> q) {
  CompensatedSum sum;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < p.size() || j < q.size()) {
    if (j == q.size() || (i < p.size() && p[i].column < q[j].column)) {
      sum.add(p[i++].value);
    } else if (i == p.size() || q[j].column < p[i].column) {
      sum.add(q[j++].value);
    } else {
      sum.add(squared_root_difference(p[i++].value, q[j++].value));
    }
  }
  return similarity_from_distance_sum(sum.value());
}

SimilarityMatrix pairwise_similarities(const CsrMatrix& beta, std::size_t workers) {
  const std::size_t k = beta.rows();
  SimilarityMatrix sims(k);
  // Each worker owns whole rows x and fills (x, y > x); cells are disjoint.
  parallel_for(k, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t y = x + 1; y < k; ++y) {
        sims.set(x, y, hellinger_similarity(beta.row(x), beta.row(y)));
      }
    }
  });
  return sims;
}

std::vector<PairContribution> map_emit(std::span<const ColumnEntry> column,
                                       std::size_t num_topics) {
  std::vector<double> value(num_topics, 0.0);
  std::vector<bool> present(num_topics, false);
  for (const ColumnEntry& e : column) {
    if (e.topic >= num_topics) {
      throw std::invalid_argument("map_emit: topic " + std::to_string(e.topic) +
                                  " out of range");
    }
    if (present[e.topic]) {
      throw std::invalid_argument("map_emit: duplicate topic " + std::to_string(e.topic));
    }
    present[e.topic] = true;
    value[e.topic] = e.value;
  }

  std::vector<TopicId> topics;
  topics.reserve(column.size());
  for (const ColumnEntry& e : column) topics.push_back(e.topic);
  std::sort(topics.begin(), topics.end());

  std::vector<PairContribution> out;
  for (TopicId x = 0; x < num_topics; ++x) {
    if (present[x]) {
      for (TopicId y = x + 1; y < num_topics; ++y) {
        out.push_back({{x, y}, squared_root_difference(value[x], value[y])});
      }
    } else {
      // Only partners present in the column contribute.
      for (auto it = std::upper_bound(topics.begin(), topics.end(), x); it != topics.end();
           ++it) {
        out.push_back({{x, *it}, value[*it]});
      }
    }
  }
  return out;
}

double reduce_pair(std::span<const double> contributions) {
  CompensatedSum sum;
  for (double e : contributions) {
    if (e < 0.0) throw std::invalid_argument("reduce_pair: negative contribution");
    sum.add(e);
  }
  return similarity_from_distance_sum(sum.value());
}

SimilarityMatrix map_reduce_similarities(const CsrMatrix& beta, std::size_t workers) {
  const std::size_t k = beta.rows();
  const std::size_t words = beta.cols();

  // Group cells by word: (i : (j, beta_ji)).
  std::vector<std::size_t> column_offsets(words + 1, 0);
  for (std::size_t t = 0; t < k; ++t) {
    for (const SparseEntry& e : beta.row(t)) ++column_offsets[e.column + 1];
  }
  for (std::size_t w = 0; w < words; ++w) column_offsets[w + 1] += column_offsets[w];
  std::vector<ColumnEntry> columns(column_offsets.back());
  {
    std::vector<std::size_t> fill(column_offsets.begin(), column_offsets.end() - 1);
    for (std::size_t t = 0; t < k; ++t) {
      for (const SparseEntry& e : beta.row(t)) columns[fill[e.column]++] = {t, e.value};
    }
  }

  // Map: each worker handles a contiguous word range, so concatenating the
  // worker outputs in worker order keeps contributions in word order.
  if (workers == 0) workers = default_workers();
  std::vector<std::vector<PairContribution>> emitted(workers);
  parallel_for(words, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t i = begin; i < end; ++i) {
      std::span<const ColumnEntry> column(columns.data() + column_offsets[i],
                                          column_offsets[i + 1] - column_offsets[i]);
      if (column.empty()) continue;
      auto out = map_emit(column, k);
      emitted[w].insert(emitted[w].end(), out.begin(), out.end());
    }
  });

  // Shuffle: stable counting sort by pair key.
  auto key = [k](const TopicPair& p) { return p.x * k + p.y; };
  std::vector<std::size_t> bucket_offsets(k * k + 1, 0);
  for (const auto& part : emitted) {
    for (const PairContribution& c : part) ++bucket_offsets[key(c.pair) + 1];
  }
  for (std::size_t b = 0; b < k * k; ++b) bucket_offsets[b + 1] += bucket_offsets[b];
  std::vector<double> grouped(bucket_offsets.back());
  {
    std::vector<std::size_t> fill(bucket_offsets.begin(), bucket_offsets.end() - 1);
    for (const auto& part : emitted) {
      for (const PairContribution& c : part) grouped[fill[key(c.pair)]++] = c.value;
    }
  }
  emitted.clear();

  // Reduce.
  SimilarityMatrix sims(k);
  parallel_for(k, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t y = x + 1; y < k; ++y) {
        std::size_t b = x * k + y;
        std::span<const double> values(grouped.data() + bucket_offsets[b],
                                       bucket_offsets[b + 1] - bucket_offsets[b]);
        sims.set(x, y, reduce_pair(values));
      }
    }
  });
  return sims;
}

ThresholdSelection select_threshold(const SimilarityMatrix& sims, double target_density) {
  const std::size_t k = sims.size();
  if (k < 2) throw std::invalid_argument("select_threshold: need at least 2 topics");
  if (!(target_density > 0.0 && target_density <= 1.0)) {
    throw std::invalid_argument("select_threshold: target density must be in (0, 1]");
  }
  std::vector<double> values = sims.upper_triangle();
  std::sort(values.begin(), values.end());
  const double pairs = static_cast<double>(values.size());

  ThresholdSelection out;
  if (target_density >= 1.0) {
    out.xi = std::nextafter(values.front(), -std::numeric_limits<double>::infinity());
    out.edge_count = values.size();
  } else {
    // Walk candidate values ascending; the first one whose strict upper tail
    // fits the target wins. The largest value always fits (empty tail).
    for (std::size_t i = 0; i < values.size();) {
      std::size_t j = i;
      while (j < values.size() && values[j] == values[i]) ++j;
      std::size_t above = values.size() - j;
      if (static_cast<double>(above) / pairs <= target_density) {
        out.xi = values[i];
        out.edge_count = above;
        break;
      }
      i = j;
    }
  }
  out.density = static_cast<double>(out.edge_count) / pairs;
  out.empty_graph = out.edge_count == 0;
  return out;
}

EdgeList threshold_edges(const SimilarityMatrix& sims, double xi) {
  EdgeList list;
  list.threshold = xi;
  for (TopicId x = 0; x < sims.size(); ++x) {
    for (TopicId y = x + 1; y < sims.size(); ++y) {
      if (sims(x, y) > xi) list.edges.push_back({x, y, sims(x, y)});
    }
  }
  return list;
}

TopicGraph build_network(const SimilarityMatrix& sims, double xi,
                         const TopicAssignment& assignment) {
  if (!(xi < 1.0)) throw std::invalid_argument("build_network: threshold must be below 1");
  std::vector<TopicNode> nodes(sims.size());
  for (TopicId t = 0; t < sims.size(); ++t) {
    nodes[t].topic = t;
    nodes[t].doc_count = t < assignment.doc_counts.size() ? assignment.doc_counts[t] : 0;
  }
  return TopicGraph(std::move(nodes), threshold_edges(sims, xi));
}

std::string similarity_tsv(const SimilarityMatrix& sims) {
  std::string out;
  for (TopicId x = 0; x < sims.size(); ++x) {
    for (TopicId y = x + 1; y < sims.size(); ++y) {
      out += std::to_string(x);
      out += '\t';
      out += std::to_string(y);
      out += '\t';
      out += format_double(sims(x, y));
      out += '\n';
    }
  }
  return out;
}

}  // namespace topicnet
