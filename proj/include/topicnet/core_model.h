#ifndef TOPICNET_CORE_MODEL_H_
#define TOPICNET_CORE_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace topicnet {

using TopicId = std::size_t;
using WordId = std::size_t;
using DocIndex = std::size_t;

/// Input could not be parsed. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input parsed but violates a data invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Document {
  std::string id;
  std::string text;
  std::map<std::string, std::string> facets;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const Document& operator[](DocIndex i) const { return documents_[i]; }
  const std::vector<Document>& documents() const { return documents_; }

  /// Index of the document with the given id, or size() when absent.
  DocIndex find(std::string_view id) const;

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, DocIndex> by_id_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const { return terms_.size(); }
  const std::string& term(WordId id) const { return terms_[id]; }
  const std::vector<std::string>& terms() const { return terms_; }
  /// Word id of `term`, or size() when the term is not in the vocabulary.
  WordId find(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, WordId> index_;
};

/// One nonzero of a sparse row.
struct SparseEntry {
  std::size_t column;
  double value;
};

/// Compressed sparse row matrix. Columns within a row are strictly increasing.
class CsrMatrix {
 public:
  CsrMatrix() : offsets_{0} {}
  CsrMatrix(std::size_t cols, std::vector<std::size_t> offsets,
            std::vector<SparseEntry> entries);

  std::size_t rows() const { return offsets_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return entries_.size(); }

  std::span<const SparseEntry> row(std::size_t r) const {
    return {entries_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
  }
  double at(std::size_t r, std::size_t c) const;
  std::vector<double> dense_row(std::size_t r) const;

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<SparseEntry> entries_;
};

/// Dense row-major matrix of document-topic proportions.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

inline constexpr double kRowSumTolerance = 1e-4;
inline constexpr double kStochasticTolerance = 1e-6;
inline constexpr double kDropBelow = 1e-9;

/// LDA output: theta (N x K) and beta (K x |W|), both row-stochastic.
class TopicModel {
 public:
  TopicModel() = default;
  /// Validates and renormalizes rows. Rows whose sum is outside
  /// [1 - kRowSumTolerance, 1 + kRowSumTolerance] raise ValidationError.
  TopicModel(DenseMatrix theta, CsrMatrix beta, Vocabulary vocabulary);

  std::size_t num_topics() const { return beta_.rows(); }
  std::size_t num_documents() const { return theta_.rows(); }
  const DenseMatrix& theta() const { return theta_; }
  const CsrMatrix& beta() const { return beta_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }

 private:
  DenseMatrix theta_;
  CsrMatrix beta_;
  Vocabulary vocabulary_;
};

struct TopicAssignment {
  std::vector<TopicId> cluster_of;
  std::vector<std::size_t> doc_counts;

  std::vector<DocIndex> documents_of(TopicId topic) const;
};

Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl);
std::string serialize_corpus(const Corpus& corpus);

Vocabulary load_vocabulary(const std::filesystem::path& path);
std::vector<std::string> load_term_list(const std::filesystem::path& path);

/// Assembles a CSR matrix from (row, column, value) triplets in any order.
/// Duplicate cells raise ValidationError. Entries below kDropBelow are dropped.
CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols,
                            std::string_view tsv, std::string_view what);

/// Reads beta and theta TSV triplets plus the vocabulary. K is the largest
/// topic id seen in either file plus one; N is the largest doc index plus one.
TopicModel load_topic_model(const std::filesystem::path& beta_path,
                            const std::filesystem::path& theta_path,
                            const std::filesystem::path& vocab_path);

/// Same as load_topic_model but from in-memory text.
TopicModel parse_topic_model(std::string_view beta_tsv, std::string_view theta_tsv,
                             std::vector<std::string> vocab_terms);

/// Argmax over each theta row, lowest topic index on ties.
TopicAssignment assign_clusters(const TopicModel& model);

std::string read_file(const std::filesystem::path& path);

}  // namespace topicnet

#endif  // TOPICNET_CORE_MODEL_H_
