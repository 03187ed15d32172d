#include "advq/vocabulary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace advq {

VocabularyStats VocabularyStats::build(const std::vector<std::vector<std::string>>& docs,
                                       int ngram_max, std::size_t min_df) {
  if (docs.empty()) throw std::invalid_argument("empty corpus");
  if (ngram_max != 1 && ngram_max != 2) {
    throw std::invalid_argument("ngram_max must be 1 or 2");
  }
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& tokens : docs) {
    std::unordered_set<std::string> seen;
    for (auto& gram : ngrams(tokens, ngram_max)) {
      if (seen.insert(gram).second) ++counts[gram];
    }
  }

  std::map<std::string, std::size_t> kept;
  for (auto& [term, df] : counts) {
    if (df >= std::max<std::size_t>(min_df, 1)) kept.emplace(term, df);
  }

  VocabularyStats stats;
  stats.n_docs_ = docs.size();
  stats.ngram_max_ = ngram_max;
  stats.min_df_ = min_df;
  stats.terms_.reserve(kept.size());
  std::vector<double> unigram_idf;
  const double n = static_cast<double>(docs.size());
  for (auto& [term, df] : kept) {
    const auto id = static_cast<TermId>(stats.terms_.size());
    const double idf = std::log(n / static_cast<double>(df)) + 1.0;
    stats.index_.emplace(term, id);
    stats.terms_.push_back(term);
    stats.df_.push_back(df);
    stats.idf_.push_back(idf);
    if (term.find(' ') == std::string::npos) unigram_idf.push_back(idf);
  }
  if (!unigram_idf.empty()) {
    std::sort(unigram_idf.begin(), unigram_idf.end());
    const auto m = unigram_idf.size();
    stats.median_unigram_idf_ =
        m % 2 == 1 ? unigram_idf[m / 2] : 0.5 * (unigram_idf[m / 2 - 1] + unigram_idf[m / 2]);
  }
  return stats;
}

VocabularyStats VocabularyStats::build(const std::vector<TokenizedDoc>& docs, int ngram_max,
                                       std::size_t min_df) {
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(docs.size());
  for (const auto& doc : docs) tokens.push_back(doc.tokens);
  return build(tokens, ngram_max, min_df);
}

std::optional<TermId> VocabularyStats::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VocabularyStats::df(std::string_view term) const {
  auto id = find(term);
  return id ? df_[*id] : 0;
}

double VocabularyStats::idf(std::string_view term) const {
  auto id = find(term);
  return id ? idf_[*id] : 0.0;
}

SparseVector SparseVector::from_entries(std::vector<Entry> entries) {
  for (const auto& [id, w] : entries) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("sparse weights must be finite and non-negative");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVector v;
  for (const auto& [id, w] : entries) {
    if (!v.entries_.empty() && v.entries_.back().first == id) {
      v.entries_.back().second += w;
    } else {
      v.entries_.emplace_back(id, w);
    }
  }
  std::erase_if(v.entries_, [](const Entry& e) { return e.second == 0.0; });
  return v;
}

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.second * e.second;
  return std::sqrt(sum);
}

double SparseVector::dot(const SparseVector& other) const {
  double sum = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

SparseVector SparseVector::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  SparseVector v = *this;
  for (auto& e : v.entries_) e.second *= factor;
  return v;
}

SparseVector tfidf_vector(const std::vector<std::string>& tokens, const VocabularyStats& stats) {
  std::unordered_map<TermId, double> tf;
  for (const auto& gram : ngrams(tokens, stats.ngram_max())) {
    if (auto id = stats.find(gram)) tf[*id] += 1.0;
  }
  std::vector<SparseVector::Entry> entries;
  entries.reserve(tf.size());
  for (const auto& [id, count] : tf) entries.emplace_back(id, count * stats.idf(id));
  auto v = SparseVector::from_entries(std::move(entries));
  const double norm = v.norm();
  return norm > 0.0 ? v.scaled(1.0 / norm) : v;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

}  // namespace advq
