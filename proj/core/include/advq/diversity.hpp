#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advq/cloze.hpp"
#include "advq/vocabulary.hpp"

namespace advq {

// Row-major dense matrix, just enough for passing results around.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct ProjectedCorpus {
  std::vector<std::string> doc_ids;
  Matrix matrix;                        // n_docs x dims, U * Sigma
  std::vector<double> singular_values;  // descending
  Matrix components;                    // vocab x dims, right singular vectors
};

struct SvdOptions {
  // Dense exact SVD when both sides are at most this; randomized otherwise.
  std::size_t exact_limit = 500;
  std::size_t oversample = 10;
  std::size_t power_iterations = 4;
  std::uint64_t seed = 0;
  bool force_randomized = false;
};

// Rank-`dims` truncated SVD of the doc-term matrix whose rows are `rows`.
// Each component's sign is fixed so its largest-magnitude entry is positive.
// Throws std::invalid_argument when dims is 0 or exceeds min(n_docs, vocab_size).
ProjectedCorpus project_corpus(const std::vector<SparseVector>& rows, std::size_t vocab_size,
                               std::size_t dims, const SvdOptions& options = {});

// U * Sigma * V^T, n_docs x vocab.
Matrix reconstruct(const ProjectedCorpus& projection);

struct KMeansResult {
  std::vector<std::size_t> assignments;
  Matrix centroids;                 // k x dims
  std::vector<double> wcss_history;  // one entry per completed iteration
  std::size_t iterations = 0;
  bool converged = false;

  double wcss() const { return wcss_history.empty() ? 0.0 : wcss_history.back(); }
};

// Lloyd iterations from a seeded k-means++ start. Stops when no point changes
// cluster or after max_iter. An empty cluster takes over the point farthest
// from its centroid. Throws std::invalid_argument unless 1 <= k <= rows.
KMeansResult cluster_topics(const Matrix& points, std::size_t k, std::uint64_t seed,
                            std::size_t max_iter = 100);

double within_cluster_ss(const Matrix& points, const std::vector<std::size_t>& assignments,
                         const Matrix& centroids);

using TermPredicate = std::function<bool(std::string_view)>;

// Rough noun/verb filter: alphabetic words of 3+ letters that are not
// function words and do not carry a typical adjective/adverb suffix.
bool noun_or_verb_heuristic(std::string_view term);

// score(t) = df_cluster(t) / |cluster| - df_global(t) / n_global over the
// question texts. Ties by term. Returns at most top_n terms.
std::vector<std::pair<std::string, double>> topic_keywords(
    const std::vector<std::vector<std::string>>& cluster_question_docs,
    const VocabularyStats& global_stats, const TermPredicate& filter, std::size_t top_n);

struct TopicCluster {
  std::size_t cluster_id = 0;
  std::vector<std::string> member_ids;
  std::vector<double> centroid;
  std::vector<std::pair<std::string, double>> keywords;
  std::string example_question;  // of the member nearest the centroid
};

struct DiversityParams {
  std::size_t dims = 100;
  std::size_t k = 20;
  std::size_t max_iter = 100;
  std::size_t top_n = 8;
  std::size_t min_df = 1;
  bool noun_verb_filter = false;
  std::uint64_t seed = 0;
};

struct DiversityReport {
  std::size_t dims = 0;  // effective rank after capping at min(n_docs, vocab)
  std::vector<TopicCluster> clusters;
  std::vector<double> wcss_history;
};

// Clusters the narratives and surfaces keywords from their ground-truth
// questions. dims is capped at min(n_docs, vocab) here.
DiversityReport diversity_report(const std::vector<ExtractedNarrative>& narratives,
                                 const DiversityParams& params);

std::string diversity_csv(const DiversityReport& report);
std::string diversity_text(const DiversityReport& report, std::size_t n_docs);

}  // namespace advq
