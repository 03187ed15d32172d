#include "advq/diversity.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "advq/io.hpp"
#include "advq/random.hpp"
#include "advq/text.hpp"

namespace advq {

namespace {

using Eigen::MatrixXd;

double gaussian(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u = 1.0 - rng.uniform_real();
  const double v = rng.uniform_real();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Eigen::SparseMatrix<double, Eigen::RowMajor> to_sparse(const std::vector<SparseVector>& rows,
                                                       std::size_t vocab_size) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [term, w] : rows[r].entries()) {
      if (term >= vocab_size) throw std::invalid_argument("term id outside vocabulary");
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(term), w);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(static_cast<Eigen::Index>(rows.size()),
                                                 static_cast<Eigen::Index>(vocab_size));
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

MatrixXd orthonormal_basis(const MatrixXd& y) {
  Eigen::HouseholderQR<MatrixXd> qr(y);
  return qr.householderQ() * MatrixXd::Identity(y.rows(), y.cols());
}

struct Svd {
  MatrixXd u;
  Eigen::VectorXd s;
  MatrixXd v;
};

Svd exact_svd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, std::size_t dims) {
  const MatrixXd dense(a);
  Eigen::JacobiSVD<MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto k = static_cast<Eigen::Index>(dims);
  return {svd.matrixU().leftCols(k), svd.singularValues().head(k), svd.matrixV().leftCols(k)};
}

Svd randomized_svd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, std::size_t dims,
                   const SvdOptions& options) {
  const auto n = a.rows();
  const auto v = a.cols();
  const auto l = std::min<Eigen::Index>(static_cast<Eigen::Index>(dims + options.oversample),
                                        std::min(n, v));
  Rng rng(derive_seed(options.seed, "svd"));
  MatrixXd omega(v, l);
  for (Eigen::Index c = 0; c < l; ++c) {
    for (Eigen::Index r = 0; r < v; ++r) omega(r, c) = gaussian(rng);
  }
  MatrixXd q = orthonormal_basis(a * omega);
  for (std::size_t it = 0; it < options.power_iterations; ++it) {
    const MatrixXd z = orthonormal_basis(a.transpose() * q);
    q = orthonormal_basis(a * z);
  }
  const MatrixXd b = (a.transpose() * q).transpose();  // l x v
  Eigen::JacobiSVD<MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto k = static_cast<Eigen::Index>(dims);
  return {q * svd.matrixU().leftCols(k), svd.singularValues().head(k),
          svd.matrixV().leftCols(k)};
}

double squared_distance(const Matrix& points, std::size_t row, const Matrix& centroids,
                        std::size_t c) {
  double sum = 0.0;
  for (std::size_t j = 0; j < points.cols; ++j) {
    const double d = points(row, j) - centroids(c, j);
    sum += d * d;
  }
  return sum;
}

void copy_row(const Matrix& from, std::size_t from_row, Matrix& to, std::size_t to_row) {
  for (std::size_t j = 0; j < from.cols; ++j) to(to_row, j) = from(from_row, j);
}

Matrix kmeans_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows;
  Matrix centroids(k, points.cols);
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.uniform(n);
  copy_row(points, first, centroids, 0);
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points, i, centroids, 0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      double target = rng.uniform_real() * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        pick = i;
        target -= d2[i];
        if (target < 0.0) break;
      }
    } else {
      // All remaining points coincide with a centroid.
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    copy_row(points, pick, centroids, c);
    chosen[pick] = true;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points, i, centroids, c));
    }
  }
  return centroids;
}

// Rough closed-class list for the keyword filter.
const std::unordered_set<std::string_view>& function_words() {
  static const std::unordered_set<std::string_view> words = {
      "the", "and", "but", "for", "nor", "yet", "are", "was", "were", "been", "being", "have",
      "has", "had", "does", "did", "doing", "can", "could", "should", "would", "will", "shall",
      "may", "might", "must", "what", "when", "where", "which", "who", "whom", "whose", "why",
      "how", "this", "that", "these", "those", "there", "here", "then", "than", "you", "your",
      "yours", "him", "his", "her", "hers", "she", "they", "them", "their", "theirs", "our",
      "ours", "its", "it's", "i'm", "i've", "i'd", "i'll", "myself", "yourself", "himself",
      "herself", "itself", "themselves", "with", "without", "from", "into", "onto", "about",
      "above", "below", "over", "under", "after", "before", "between", "through", "during",
      "any", "anyone", "anything", "some", "someone", "something", "every", "everyone",
      "everything", "all", "not", "don't", "doesn't", "didn't", "can't", "won't", "isn't",
      "aren't", "wasn't", "very", "too", "also", "just", "only", "even", "still", "more",
      "most", "much", "many", "such", "other", "another", "each", "both", "either", "neither",
      "own", "same", "out", "off", "again", "once", "because", "while", "until", "since", "if",
      "whether", "though", "although", "get", "got", "really", "thing", "things"};
  return words;
}

}  // namespace

ProjectedCorpus project_corpus(const std::vector<SparseVector>& rows, std::size_t vocab_size,
                               std::size_t dims, const SvdOptions& options) {
  if (rows.empty()) throw std::invalid_argument("project_corpus: empty corpus");
  if (dims == 0 || dims > std::min(rows.size(), vocab_size)) {
    throw std::invalid_argument("project_corpus: dims must be in [1, min(n_docs, vocab)]");
  }
  const auto a = to_sparse(rows, vocab_size);
  const bool exact = !options.force_randomized && rows.size() <= options.exact_limit &&
                     vocab_size <= options.exact_limit;
  Svd svd = exact ? exact_svd(a, dims) : randomized_svd(a, dims, options);

  for (Eigen::Index c = 0; c < svd.v.cols(); ++c) {
    Eigen::Index arg = 0;
    svd.v.col(c).cwiseAbs().maxCoeff(&arg);
    if (svd.v(arg, c) < 0.0) {
      svd.v.col(c) *= -1.0;
      svd.u.col(c) *= -1.0;
    }
  }

  ProjectedCorpus out;
  out.matrix = Matrix(rows.size(), dims);
  out.components = Matrix(vocab_size, dims);
  out.singular_values.assign(svd.s.data(), svd.s.data() + svd.s.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < dims; ++c) {
      const auto rr = static_cast<Eigen::Index>(r), cc = static_cast<Eigen::Index>(c);
      out.matrix(r, c) = svd.u(rr, cc) * svd.s(cc);
    }
  }
  for (std::size_t t = 0; t < vocab_size; ++t) {
    for (std::size_t c = 0; c < dims; ++c) {
      out.components(t, c) = svd.v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

Matrix reconstruct(const ProjectedCorpus& projection) {
  const auto& us = projection.matrix;
  const auto& v = projection.components;
  Matrix out(us.rows, v.rows);
  for (std::size_t r = 0; r < us.rows; ++r) {
    for (std::size_t t = 0; t < v.rows; ++t) {
      double sum = 0.0;
      for (std::size_t c = 0; c < us.cols; ++c) sum += us(r, c) * v(t, c);
      out(r, t) = sum;
    }
  }
  return out;
}

double within_cluster_ss(const Matrix& points, const std::vector<std::size_t>& assignments,
                         const Matrix& centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.rows; ++i) {
    sum += squared_distance(points, i, centroids, assignments[i]);
  }
  return sum;
}

KMeansResult cluster_topics(const Matrix& points, std::size_t k, std::uint64_t seed,
                            std::size_t max_iter) {
  const std::size_t n = points.rows;
  if (k == 0 || k > n) throw std::invalid_argument("cluster_topics: k must be in [1, n_docs]");
  Rng rng(derive_seed(seed, "kmeans"));
  KMeansResult result;
  result.centroids = kmeans_plus_plus(points, k, rng);
  result.assignments.assign(n, k);  // k marks "unassigned"

  std::vector<double> dist(n);
  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t current = result.assignments[i];
      std::size_t best = current;
      double best_d = current < k ? squared_distance(points, i, result.centroids, current)
                                  : std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(points, i, result.centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best != current) changed = true;
      result.assignments[i] = best;
      dist[i] = best_d;
    }
    if (iter > 1 && !changed) {
      result.converged = true;
      break;
    }

    std::vector<std::size_t> sizes(k, 0);
    for (auto a : result.assignments) ++sizes[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[result.assignments[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      }
      if (far == n) continue;
      --sizes[result.assignments[far]];
      result.assignments[far] = c;
      sizes[c] = 1;
      dist[far] = 0.0;
      copy_row(points, far, result.centroids, c);
    }

    Matrix sums(k, points.cols);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < points.cols; ++j) sums(result.assignments[i], j) += points(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t j = 0; j < points.cols; ++j) {
        result.centroids(c, j) = sums(c, j) / static_cast<double>(sizes[c]);
      }
    }
    result.wcss_history.push_back(within_cluster_ss(points, result.assignments, result.centroids));
    result.iterations = iter;
  }
  return result;
}

bool noun_or_verb_heuristic(std::string_view term) {
  if (term.size() < 3) return false;
  if (!std::all_of(term.begin(), term.end(),
                   [](unsigned char c) { return std::isalpha(c) != 0; })) {
    return false;
  }
  if (function_words().contains(term)) return false;
  static constexpr std::array<std::string_view, 7> kModifierSuffixes = {
      "ly", "ous", "ful", "ive", "able", "ible", "est"};
  for (auto suffix : kModifierSuffixes) {
    if (term.size() > suffix.size() + 2 && term.ends_with(suffix)) return false;
  }
  return true;
}

std::vector<std::pair<std::string, double>> topic_keywords(
    const std::vector<std::vector<std::string>>& cluster_question_docs,
    const VocabularyStats& global_stats, const TermPredicate& filter, std::size_t top_n) {
  if (cluster_question_docs.empty()) return {};
  std::map<std::string, std::size_t> df;
  for (const auto& doc : cluster_question_docs) {
    std::unordered_set<std::string_view> seen;
    for (const auto& t : doc) {
      if (seen.insert(t).second) ++df[t];
    }
  }
  const double size = static_cast<double>(cluster_question_docs.size());
  const double n_global = static_cast<double>(global_stats.n_docs());
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& [term, count] : df) {
    if (filter && !filter(term)) continue;
    const double global = static_cast<double>(global_stats.df(term)) / n_global;
    scored.emplace_back(term, static_cast<double>(count) / size - global);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (scored.size() > top_n) scored.resize(top_n);
  return scored;
}

DiversityReport diversity_report(const std::vector<ExtractedNarrative>& narratives,
                                 const DiversityParams& params) {
  DiversityReport report;
  if (narratives.empty()) return report;
  std::vector<std::vector<std::string>> docs, questions;
  for (const auto& n : narratives) {
    docs.push_back(tokenize(n.narrative.masked_text));
    questions.push_back(tokenize(n.ground_truth.text));
  }
  const auto stats = VocabularyStats::build(docs, 1, params.min_df);
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(tfidf_vector(d, stats));

  const std::size_t dims = std::min({params.dims, docs.size(), stats.size()});
  if (dims == 0) return report;
  SvdOptions svd;
  svd.seed = params.seed;
  const auto projection = project_corpus(rows, stats.size(), dims, svd);
  const std::size_t k = std::min(params.k, docs.size());
  const auto km = cluster_topics(projection.matrix, k, params.seed, params.max_iter);
  report.dims = dims;
  report.wcss_history = km.wcss_history;

  const auto question_stats = VocabularyStats::build(questions, 1, 1);
  TermPredicate filter;
  if (params.noun_verb_filter) filter = noun_or_verb_heuristic;
  for (std::size_t c = 0; c < k; ++c) {
    TopicCluster cluster;
    cluster.cluster_id = c;
    std::vector<std::vector<std::string>> member_questions;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < narratives.size(); ++i) {
      if (km.assignments[i] != c) continue;
      cluster.member_ids.push_back(narratives[i].narrative.post_id);
      member_questions.push_back(questions[i]);
      const double d = squared_distance(projection.matrix, i, km.centroids, c);
      if (d < nearest) {
        nearest = d;
        cluster.example_question = narratives[i].ground_truth.text;
      }
    }
    cluster.centroid.assign(km.centroids.data.begin() + static_cast<std::ptrdiff_t>(c * dims),
                            km.centroids.data.begin() + static_cast<std::ptrdiff_t>((c + 1) * dims));
    cluster.keywords = topic_keywords(member_questions, question_stats, filter, params.top_n);
    report.clusters.push_back(std::move(cluster));
  }
  std::stable_sort(report.clusters.begin(), report.clusters.end(),
                   [](const TopicCluster& x, const TopicCluster& y) {
                     return x.member_ids.size() > y.member_ids.size();
                   });
  return report;
}

namespace {

std::string keyword_list(const TopicCluster& cluster) {
  std::string out;
  for (const auto& [term, score] : cluster.keywords) {
    if (!out.empty()) out += ' ';
    out += term;
  }
  return out;
}

}  // namespace

std::string diversity_csv(const DiversityReport& report) {
  std::ostringstream out;
  out << "cluster_id,size,keywords,example_question\n";
  for (const auto& c : report.clusters) {
    out << c.cluster_id << ',' << c.member_ids.size() << ',' << csv_field(keyword_list(c)) << ','
        << csv_field(c.example_question) << '\n';
  }
  return out.str();
}

std::string diversity_text(const DiversityReport& report, std::size_t n_docs) {
  std::ostringstream out;
  out << "Narrative topics (" << report.clusters.size() << " clusters, " << report.dims
      << " SVD dims, " << n_docs << " narratives)\n\n";
  for (const auto& c : report.clusters) {
    const double share =
        n_docs == 0 ? 0.0 : 100.0 * static_cast<double>(c.member_ids.size()) / n_docs;
    char head[64];
    std::snprintf(head, sizeof head, "topic %zu  (%zu, %.1f%%)\n", c.cluster_id,
                  c.member_ids.size(), share);
    out << head << "  keywords: " << keyword_list(c) << '\n'
        << "  example:  " << c.example_question << "\n\n";
  }
  return out.str();
}

}  // namespace advq
