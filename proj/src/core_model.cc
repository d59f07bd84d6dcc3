#include "topicnet/core_model.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace topicnet {

namespace {

using nlohmann::json;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(std::string(what) + ": line " + std::to_string(line) +
                         ": bad number '" + std::string(field) + "'",
                     line);
  }
  return value;
}

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

std::vector<Triplet> parse_triplets(std::string_view tsv, std::string_view what) {
  std::vector<Triplet> triplets;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(tsv)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(std::string(what) + ": line " + std::to_string(line_no) +
                           ": expected 3 tab-separated fields",
                       line_no);
    }
    Triplet t{parse_number<std::size_t>(fields[0], line_no, what),
              parse_number<std::size_t>(fields[1], line_no, what),
              parse_number<double>(fields[2], line_no, what)};
    if (!(t.value >= 0.0)) {
      throw ValidationError(std::string(what) + ": line " + std::to_string(line_no) +
                            ": negative or NaN probability");
    }
    triplets.push_back(t);
  }
  return triplets;
}

CsrMatrix csr_from_parsed(std::size_t rows, std::size_t cols,
                          std::vector<Triplet> triplets, std::string_view what) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<SparseEntry> entries;
  entries.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const Triplet& t = triplets[i];
    if (t.row >= rows) {
      throw std::out_of_range(std::string(what) + ": row " + std::to_string(t.row) +
                              " out of range");
    }
    if (t.col >= cols) {
      throw std::out_of_range(std::string(what) + ": column " + std::to_string(t.col) +
                              " >= " + std::to_string(cols));
    }
    if (i > 0 && triplets[i - 1].row == t.row && triplets[i - 1].col == t.col) {
      throw ValidationError(std::string(what) + ": duplicate cell (" +
                            std::to_string(t.row) + ", " + std::to_string(t.col) + ")");
    }
    if (t.value < kDropBelow) continue;
    entries.push_back({t.col, t.value});
    ++offsets[t.row + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  return CsrMatrix(cols, std::move(offsets), std::move(entries));
}

double checked_row_scale(double sum, std::size_t row, std::string_view what) {
  if (!(sum >= 1.0 - kRowSumTolerance && sum <= 1.0 + kRowSumTolerance)) {
    throw ValidationError(std::string(what) + ": row " + std::to_string(row) +
                          " sums to " + std::to_string(sum));
  }
  return 1.0 / sum;
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  by_id_.reserve(documents_.size());
  for (DocIndex i = 0; i < documents_.size(); ++i) {
    if (!by_id_.emplace(documents_[i].id, i).second) {
      throw ValidationError("duplicate document id '" + documents_[i].id + "'");
    }
  }
}

DocIndex Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? documents_.size() : it->second;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  index_.reserve(terms_.size());
  for (WordId i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
    }
  }
}

WordId Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? terms_.size() : it->second;
}

CsrMatrix::CsrMatrix(std::size_t cols, std::vector<std::size_t> offsets,
                     std::vector<SparseEntry> entries)
    : cols_(cols), offsets_(std::move(offsets)), entries_(std::move(entries)) {
  if (offsets_.empty() || offsets_.back() != entries_.size()) {
    throw std::invalid_argument("CsrMatrix: offsets do not match entries");
  }
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  auto entries = row(r);
  auto it = std::lower_bound(entries.begin(), entries.end(), c,
                             [](const SparseEntry& e, std::size_t col) { return e.column < col; });
  return it != entries.end() && it->column == c ? it->value : 0.0;
}

std::vector<double> CsrMatrix::dense_row(std::size_t r) const {
  std::vector<double> out(cols_, 0.0);
  for (const SparseEntry& e : row(r)) out[e.column] = e.value;
  return out;
}

TopicModel::TopicModel(DenseMatrix theta, CsrMatrix beta, Vocabulary vocabulary)
    : theta_(std::move(theta)), vocabulary_(std::move(vocabulary)) {
  if (beta.cols() != vocabulary_.size()) {
    throw ValidationError("beta has " + std::to_string(beta.cols()) +
                          " columns but vocabulary has " +
                          std::to_string(vocabulary_.size()) + " terms");
  }
  if (theta_.rows() > 0 && theta_.cols() != beta.rows()) {
    throw ValidationError("theta has " + std::to_string(theta_.cols()) +
                          " topics but beta has " + std::to_string(beta.rows()));
  }

  std::vector<std::size_t> offsets{0};
  std::vector<SparseEntry> entries;
  entries.reserve(beta.nonzeros());
  for (std::size_t k = 0; k < beta.rows(); ++k) {
    double sum = 0.0;
    for (const SparseEntry& e : beta.row(k)) sum += e.value;
    double scale = checked_row_scale(sum, k, "beta");
    for (const SparseEntry& e : beta.row(k)) entries.push_back({e.column, e.value * scale});
    offsets.push_back(entries.size());
  }
  beta_ = CsrMatrix(beta.cols(), std::move(offsets), std::move(entries));

  for (std::size_t i = 0; i < theta_.rows(); ++i) {
    auto row = theta_.row(i);
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw ValidationError("theta: negative entry in row " + std::to_string(i));
      sum += v;
    }
    double scale = checked_row_scale(sum, i, "theta");
    for (double& v : row) v *= scale;
  }
}

std::vector<DocIndex> TopicAssignment::documents_of(TopicId topic) const {
  std::vector<DocIndex> docs;
  for (DocIndex i = 0; i < cluster_of.size(); ++i) {
    if (cluster_of[i] == topic) docs.push_back(i);
  }
  return docs;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Corpus parse_corpus(std::string_view jsonl) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(jsonl)) {
    ++line_no;
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("corpus: line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    auto fail = [&](const std::string& why) {
      throw ParseError("corpus: line " + std::to_string(line_no) + ": " + why, line_no);
    };
    if (!obj.is_object()) fail("expected a JSON object");
    if (!obj.contains("id") || !obj["id"].is_string()) fail("missing string field \"id\"");
    if (!obj.contains("text") || !obj["text"].is_string()) fail("missing string field \"text\"");
    Document doc;
    doc.id = obj["id"].get<std::string>();
    doc.text = obj["text"].get<std::string>();
    if (obj.contains("facets")) {
      const json& facets = obj["facets"];
      if (!facets.is_object()) fail("\"facets\" must be an object");
      for (auto it = facets.begin(); it != facets.end(); ++it) {
        if (!it.value().is_string()) fail("facet '" + it.key() + "' must be a string");
        doc.facets.emplace(it.key(), it.value().get<std::string>());
      }
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const Document& doc : corpus.documents()) {
    json obj = {{"id", doc.id}, {"text", doc.text}, {"facets", doc.facets}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> load_term_list(const std::filesystem::path& path) {
  std::vector<std::string> terms;
  const std::string content = read_file(path);
  for (std::string_view line : split_lines(content)) terms.emplace_back(line);
  return terms;
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  return Vocabulary(load_term_list(path));
}

CsrMatrix csr_from_triplets(std::size_t rows, std::size_t cols, std::string_view tsv,
                            std::string_view what) {
  return csr_from_parsed(rows, cols, parse_triplets(tsv, what), what);
}

TopicModel parse_topic_model(std::string_view beta_tsv, std::string_view theta_tsv,
                             std::vector<std::string> vocab_terms) {
  Vocabulary vocab(std::move(vocab_terms));
  auto beta_triplets = parse_triplets(beta_tsv, "beta");
  auto theta_triplets = parse_triplets(theta_tsv, "theta");

  std::size_t k = 0;
  for (const Triplet& t : beta_triplets) k = std::max(k, t.row + 1);
  for (const Triplet& t : theta_triplets) k = std::max(k, t.col + 1);
  std::size_t n = 0;
  for (const Triplet& t : theta_triplets) n = std::max(n, t.row + 1);

  CsrMatrix beta = csr_from_parsed(k, vocab.size(), std::move(beta_triplets), "beta");

  DenseMatrix theta(n, k);
  std::vector<bool> seen(n * k, false);
  for (const Triplet& t : theta_triplets) {
    if (seen[t.row * k + t.col]) {
      throw ValidationError("theta: duplicate cell (" + std::to_string(t.row) + ", " +
                            std::to_string(t.col) + ")");
    }
    seen[t.row * k + t.col] = true;
    theta(t.row, t.col) = t.value;
  }
  return TopicModel(std::move(theta), std::move(beta), std::move(vocab));
}

TopicModel load_topic_model(const std::filesystem::path& beta_path,
                            const std::filesystem::path& theta_path,
                            const std::filesystem::path& vocab_path) {
  return parse_topic_model(read_file(beta_path), read_file(theta_path),
                           load_term_list(vocab_path));
}

TopicAssignment assign_clusters(const TopicModel& model) {
  TopicAssignment out;
  const std::size_t k = model.num_topics();
  out.cluster_of.resize(model.num_documents(), 0);
  out.doc_counts.assign(k, 0);
  for (DocIndex i = 0; i < model.num_documents(); ++i) {
    auto row = model.theta().row(i);
    TopicId best = 0;
    for (TopicId t = 1; t < row.size(); ++t) {
      if (row[t] > row[best]) best = t;
    }
    out.cluster_of[i] = best;
    if (k > 0) ++out.doc_counts[best];
  }
  return out;
}

}  // namespace topicnet
