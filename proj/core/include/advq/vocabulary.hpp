#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "advq/text.hpp"

namespace advq {

using TermId = std::uint32_t;

// Corpus document frequencies and idf = ln(n_docs / df) + 1.
//
// Terms are stored in lexicographic order, so term ids are a deterministic
// function of the corpus. Immutable after construction and safe to share.
class VocabularyStats {
 public:
  // Throws std::invalid_argument("empty corpus") when docs is empty.
  static VocabularyStats build(const std::vector<std::vector<std::string>>& docs,
                               int ngram_max = 1, std::size_t min_df = 1);
  static VocabularyStats build(const std::vector<TokenizedDoc>& docs, int ngram_max = 1,
                               std::size_t min_df = 1);

  std::size_t n_docs() const { return n_docs_; }
  int ngram_max() const { return ngram_max_; }
  std::size_t min_df() const { return min_df_; }
  std::size_t size() const { return terms_.size(); }

  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_[id]; }
  std::size_t df(TermId id) const { return df_[id]; }
  double idf(TermId id) const { return idf_[id]; }

  // 0 for terms that are not in the vocabulary.
  std::size_t df(std::string_view term) const;
  double idf(std::string_view term) const;

  // Median idf over stored unigrams; 0 for an empty vocabulary.
  double median_unigram_idf() const { return median_unigram_idf_; }

 private:
  std::size_t n_docs_ = 0;
  int ngram_max_ = 1;
  std::size_t min_df_ = 1;
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, TermId> index_;
  double median_unigram_idf_ = 0.0;
};

// Sorted (term id, weight) pairs with strictly positive finite weights.
class SparseVector {
 public:
  using Entry = std::pair<TermId, double>;

  SparseVector() = default;
  // Sums duplicate ids and drops zeros. Negative or non-finite weights throw.
  static SparseVector from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double norm() const;
  double dot(const SparseVector& other) const;
  SparseVector scaled(double factor) const;

 private:
  std::vector<Entry> entries_;
};

// tf(t) * idf(t) over in-vocabulary n-grams, L2-normalized. A document with no
// in-vocabulary terms gives the empty vector.
SparseVector tfidf_vector(const std::vector<std::string>& tokens, const VocabularyStats& stats);

// dot / (|a| |b|) clamped to [-1, 1]; 0 when either norm is 0.
double cosine(const SparseVector& a, const SparseVector& b);

}  // namespace advq
