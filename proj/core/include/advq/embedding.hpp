#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advq/vocabulary.hpp"

namespace advq {

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : values_(dim, 0.0) {}
  // Throws std::invalid_argument on non-finite components.
  explicit DenseVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double norm() const;
  bool is_zero() const;
  DenseVector normalized() const;

 private:
  std::vector<double> values_;
};

// Throws std::invalid_argument on dimension mismatch. Same zero-norm and
// clamping rules as the sparse overload.
double cosine(const DenseVector& a, const DenseVector& b);

// Pre-trained word vectors. Immutable once loaded.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  // Returns false, keeping the first vector, when the token already exists.
  bool add(std::string token, std::span<const double> vector);
  // Empty span when absent.
  std::span<const double> find(std::string_view token) const;
  bool contains(std::string_view token) const { return !find(token).empty(); }

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

struct EmbeddingLoad {
  EmbeddingTable table;
  std::size_t lines = 0;
  std::size_t duplicates = 0;
  std::size_t malformed = 0;
};

// Text format "token v1 ... vd", dimension taken from the first vector line.
// A leading "count dim" header is detected and skipped. Lines of the wrong
// width or with non-finite values are counted and skipped.
EmbeddingLoad load_embeddings(const std::string& path);

enum class EmbedMode { mean, tfidf_weighted };

// mean: average over token occurrences found in the table.
// tfidf_weighted: average of distinct in-table tokens weighted by tf * idf.
// Yields the zero vector when nothing contributes. tfidf_weighted requires
// stats and throws std::invalid_argument without them.
DenseVector embed_doc(const std::vector<std::string>& tokens, const EmbeddingTable& table,
                      const VocabularyStats* stats, EmbedMode mode);

}  // namespace advq
