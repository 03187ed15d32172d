// Acceptance suite. Prints one PASS / FAIL / WAIVED line per criterion and
// exits nonzero if any criterion fails. Every tolerance is pinned below.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "advq/annotation.hpp"
#include "advq/baseline.hpp"
#include "advq/cloze.hpp"
#include "advq/config.hpp"
#include "advq/diversity.hpp"
#include "advq/embedding.hpp"
#include "advq/ingest.hpp"
#include "advq/io.hpp"
#include "advq/pairing.hpp"
#include "advq/pipeline.hpp"
#include "advq/random.hpp"
#include "advq/text.hpp"
#include "advq/vocabulary.hpp"

namespace fs = std::filesystem;
using namespace advq;

namespace tol {
constexpr double kDatasetCenter = 73.4;  // held-out accuracy, percent
constexpr double kDatasetBand = 4.0;     // percentage points
constexpr double kChanceBand = 3.0;      // percentage points around 50
constexpr double kGradientRelative = 1e-4;
constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kWcssSlack = 1e-12;  // relative, for floating-point reassociation
constexpr double kSvd = 1e-8;
constexpr double kKappaIndependent = 0.05;
constexpr double kBucketMean = 1e-12;
}  // namespace tol

namespace {

const fs::path kData = ADVQ_DATA_DIR;

struct Outcome {
  enum Kind { pass, fail, waived } kind;
  std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Scratch directory removed on exit.
struct Scratch {
  fs::path path;
  Scratch() {
    path = fs::temp_directory_path() / ("advq-acceptance-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// ---------------------------------------------------------------- 1

Outcome dataset_reproduction() {
  const char* dataset = std::getenv("ADVQ_DATASET");
  const char* embeddings = std::getenv("ADVQ_EMBEDDINGS");
  if (!dataset || !embeddings) {
    return {Outcome::waived, "released dataset and embeddings not available "
                             "(set ADVQ_DATASET and ADVQ_EMBEDDINGS to enable)"};
  }
  const auto instances = read_jsonl<ClozeInstance>(dataset, instance_from_json);
  const auto table = load_embeddings(embeddings).table;
  const SplitSizes sizes;  // 8865 / 2500 / 10000
  const auto split = split_dataset(instances, sizes, 13);
  const auto stats = feature_stats(instances);
  const auto examples = make_examples(split.train, stats, table);
  const auto model = train_choice_model(examples, TrainingParams{});
  const auto report = evaluate(split.heldout, model, stats, table);
  const double acc = 100.0 * report.accuracy;
  return check(std::fabs(acc - tol::kDatasetCenter) <= tol::kDatasetBand,
               "held-out accuracy " + fmt(acc, 1) + "% on " + std::to_string(report.n) +
                   " instances (target " + fmt(tol::kDatasetCenter, 1) + " +- " +
                   fmt(tol::kDatasetBand, 0) + ")");
}

// ---------------------------------------------------------------- 2

double zero_model_accuracy(const std::vector<ClozeInstance>& instances, const EmbeddingTable& table) {
  return evaluate(instances, ChoiceModel{}, feature_stats(instances), table).accuracy;
}

// Slot-a share of the labels built from the bundled corpus under many seeds.
std::pair<std::size_t, std::size_t> pooled_slot_a(const PipelineConfig& config,
                                                  const EmbeddingTable& table, int seeds) {
  auto posts = load_posts(config.paths.corpus.string()).posts;
  posts = apply_removal_list(std::move(posts), load_removal_list(config.paths.removal_list.string())).posts;
  std::size_t in_a = 0, total = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(1000 + s);
    const auto extracted = extract_narratives(posts, config.extraction, seed).narratives;
    NeighborParams np{config.pair_bounds, config.top_k, config.exact_neighbors};
    const auto paired = pair_narratives(extracted, config.ngram_max, config.min_df, np);
    const auto stats = masking_stats(extracted);
    const auto sentences = compose_sentence_vectors(extracted, table, stats);
    const auto built = build_instances(extracted, paired.pairs, table, stats, sentences,
                                       BuildParams{config.question_bounds}, seed);
    for (const auto& i : built.instances) in_a += i.label == Slot::a;
    total += built.instances.size();
  }
  return {in_a, total};
}

Outcome chance_floor(const PipelineConfig& config, const fs::path& run) {
  const auto instances = read_jsonl<ClozeInstance>(run / artifact::instances, instance_from_json);
  const auto table = load_embeddings(config.paths.embeddings.string()).table;
  const double acc = 100.0 * zero_model_accuracy(instances, table);
  const auto [in_a, total] = pooled_slot_a(config, table, 100);
  const double pooled = 100.0 * static_cast<double>(in_a) / static_cast<double>(total);
  const double sd = 100.0 * 0.5 / std::sqrt(static_cast<double>(instances.size()));
  return check(std::fabs(acc - 50.0) <= tol::kChanceBand,
               "zero-weight accuracy " + fmt(acc, 1) + "% on " + std::to_string(instances.size()) +
                   " instances, seed " + std::to_string(config.seed) + " (binomial sd " +
                   fmt(sd, 1) + " points); diagnostic: pooled over 100 seeds " + fmt(pooled, 1) +
                   "% on " + std::to_string(total) + " instances");
}

// ---------------------------------------------------------------- 3

// tf-idf cosine computed from raw counts, independent of the library.
std::vector<std::vector<double>> oracle_similarities(const std::vector<std::vector<std::string>>& docs) {
  std::map<std::string, std::size_t> df;
  for (const auto& d : docs) {
    for (const auto& t : std::set<std::string>(d.begin(), d.end())) ++df[t];
  }
  std::map<std::string, std::size_t> col;
  for (const auto& [t, _] : df) col.emplace(t, col.size());
  const double n = static_cast<double>(docs.size());
  std::vector<std::vector<double>> vecs;
  for (const auto& d : docs) {
    std::vector<double> v(col.size(), 0.0);
    for (const auto& t : d) v[col[t]] += 1.0;
    double norm = 0;
    for (const auto& [t, c] : col) {
      v[c] *= std::log(n / static_cast<double>(df[t])) + 1.0;
      norm += v[c] * v[c];
    }
    for (auto& x : v) x /= std::sqrt(norm);
    vecs.push_back(v);
  }
  std::vector<std::vector<double>> sim(docs.size(), std::vector<double>(docs.size()));
  for (std::size_t i = 0; i < docs.size(); ++i)
    for (std::size_t j = 0; j < docs.size(); ++j) {
      double dot = 0;
      for (std::size_t k = 0; k < col.size(); ++k) dot += vecs[i][k] * vecs[j][k];
      sim[i][j] = dot;
    }
  return sim;
}

// Repeatedly takes the best remaining edge among free vertices.
std::vector<std::pair<std::size_t, std::size_t>> exhaustive_greedy(
    const std::vector<std::vector<double>>& sim, const std::vector<std::string>& ids, double lo,
    double hi) {
  std::vector<bool> used(ids.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        if (used[i] || used[j] || sim[i][j] < lo || sim[i][j] > hi) continue;
        if (!best) {
          best = {i, j};
          continue;
        }
        const double cur = sim[best->first][best->second];
        // Similarities within 1e-12 count as ties, ordered by id.
        if (sim[i][j] > cur + 1e-12 ||
            (std::fabs(sim[i][j] - cur) <= 1e-12 &&
             std::tie(ids[i], ids[j]) < std::tie(ids[best->first], ids[best->second]))) {
          best = {i, j};
        }
      }
    if (!best) return out;
    used[best->first] = used[best->second] = true;
    out.push_back(*best);
  }
}

Outcome pairing_oracle() {
  Rng rng(303);
  const std::vector<std::string> vocab = {"sleep", "coffee", "rent", "dog", "work", "exam",
                                          "tired", "lease", "boss", "walk", "night", "money"};
  std::size_t mismatches = 0, out_of_bounds = 0, accepted = 0;
  const int corpora = 200;
  for (int c = 0; c < corpora; ++c) {
    const auto n = 2 + rng.uniform(49);  // 2..50 narratives
    std::vector<std::vector<std::string>> docs;
    std::vector<TokenizedDoc> tdocs;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> d;
      const auto len = 2 + rng.uniform(8);
      for (std::uint64_t k = 0; k < len; ++k) d.push_back(vocab[rng.uniform(vocab.size())]);
      ids.push_back("n" + std::to_string(100 + i));
      tdocs.push_back({ids.back(), d});
      docs.push_back(std::move(d));
    }
    const auto stats = VocabularyStats::build(tdocs, 1, 1);
    NeighborParams params;
    params.top_k = 0;
    const auto pairs = greedy_pair(build_pair_candidates(tdocs, stats, params));
    const auto oracle = exhaustive_greedy(oracle_similarities(docs), ids, 0.1, 0.8);
    bool same = pairs.size() == oracle.size();
    for (std::size_t k = 0; same && k < pairs.size(); ++k) {
      same = pairs[k].id_a == ids[oracle[k].first] && pairs[k].id_b == ids[oracle[k].second];
    }
    mismatches += same ? 0 : 1;
    for (const auto& p : pairs) {
      ++accepted;
      if (p.similarity < 0.1 || p.similarity > 0.8) ++out_of_bounds;
    }
  }
  return check(mismatches == 0 && out_of_bounds == 0,
               std::to_string(corpora) + " corpora of 2-50 narratives, " + std::to_string(accepted) +
                   " accepted pairs: " + std::to_string(mismatches) + " mismatches, " +
                   std::to_string(out_of_bounds) + " outside [0.1, 0.8]");
}

// ---------------------------------------------------------------- 4

Outcome filtering_oracle() {
  // Ten documents. Hand idf: df 1 -> ln 10 + 1, df 2 -> ln 5 + 1, df 10 -> 1.
  std::vector<std::vector<std::string>> docs(10, {"how", "do", "i", "my", "a", "the"});
  docs[0].push_back("espresso");
  docs[1].push_back("landlord");
  docs[2].push_back("landlord");
  docs[3].push_back("puppy");
  const std::map<std::string, double> hand_idf = {
      {"how", 1.0}, {"do", 1.0}, {"i", 1.0}, {"my", 1.0}, {"a", 1.0}, {"the", 1.0},
      {"espresso", 3.302585092994046}, {"landlord", 2.6094379124341003}, {"puppy", 3.302585092994046}};
  const auto stats = VocabularyStats::build(docs, 1, 1);
  for (const auto& [t, v] : hand_idf) {
    if (std::fabs(stats.idf(t) - v) > 1e-12) return check(false, "idf of '" + t + "' differs from hand value");
  }

  const std::vector<std::string> starts = {"how", "what", "should", "i", "help", "any", "my"};
  const std::vector<std::string> words = {"do", "i", "my", "a", "the", "espresso", "landlord",
                                          "puppy", "unseen"};
  Rng rng(404);
  std::size_t mismatches = 0, survivors = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    std::vector<QuestionCandidate> candidates;
    std::set<std::string> expected;
    const double threshold = std::vector<double>{1.0, 2.0, 2.6094379124341003, 3.0, 3.302585092994046,
                                                 5.0}[rng.uniform(6)];
    const auto n = 1 + rng.uniform(5);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<std::string> toks = {starts[rng.uniform(starts.size())]};
      const auto len = rng.uniform(7);
      for (std::uint64_t k = 0; k < len; ++k) toks.push_back(words[rng.uniform(words.size())]);
      std::string text = toks[0];
      text[0] = static_cast<char>(std::toupper(text[0]));
      for (std::size_t k = 1; k < toks.size(); ++k) text += " " + toks[k];
      const bool question = rng.uniform(5) != 0;
      text += question ? "?" : ".";
      candidates.push_back({text, QuestionSource::body, i,
                            question ? Detection::terminator : Detection::start_word});
      // Oracle: '?' ending, allowed start word, >= 5 words, max hand idf >= threshold.
      static const std::set<std::string> allowed = {"how", "what", "should", "help", "any"};
      double s = 0;
      for (const auto& tok : toks) {
        const auto it = hand_idf.find(tok);
        s = std::max(s, it == hand_idf.end() ? 0.0 : it->second);
      }
      if (question && allowed.count(toks[0]) && toks.size() >= 5 && s >= threshold) {
        expected.insert(text);
      }
    }
    Rng pick(static_cast<std::uint64_t>(t));
    SelectionParams params{threshold, 5};
    const auto sel = select_ground_truth_detailed(candidates, stats, params, pick);
    std::set<std::string> got;
    for (const auto& s : sel.survivors) got.insert(s.text);
    if (got != expected || sel.chosen.has_value() != !expected.empty() ||
        (sel.chosen && !expected.count(sel.chosen->text))) {
      ++mismatches;
    }
    survivors += got.size();
  }
  return check(mismatches == 0, std::to_string(trials) + " candidate sets on a 10-document corpus, " +
                                    std::to_string(survivors) + " survivors: " +
                                    std::to_string(mismatches) + " mismatches");
}

// ---------------------------------------------------------------- 5

int argmax_min(const SimilarityGrid& g) {
  return std::min(g[1][0], g[1][1]) > std::min(g[0][0], g[0][1]) ? 2 : 1;
}

// tf-idf weighted average of word vectors, computed directly.
std::vector<double> weighted_embedding(const std::vector<std::string>& tokens,
                                       const EmbeddingTable& table, const VocabularyStats& stats) {
  std::map<std::string, double> tf;
  for (const auto& t : tokens) tf[t] += 1.0;
  std::vector<double> sum(table.dim(), 0.0);
  double weight = 0;
  for (const auto& [t, c] : tf) {
    const auto v = table.find(t);
    const double w = c * stats.idf(t);
    if (v.empty() || w <= 0) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * v[i];
    weight += w;
  }
  if (weight > 0) for (auto& x : sum) x /= weight;
  return sum;
}

double plain_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return na == 0 || nb == 0 ? 0.0 : std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

Outcome masking_rule() {
  Rng rng(505);
  const int trials = 1000;
  std::size_t grid_mismatch = 0, text_mismatch = 0, swap_violations = 0;
  for (int t = 0; t < trials; ++t) {
    SimilarityGrid g;
    for (auto& row : g) for (auto& x : row) x = 2 * rng.uniform_real() - 1;
    if (rng.uniform(10) == 0) g[1] = g[0];  // exercise the tie rule
    if (choose_by_similarity(g) != argmax_min(g)) ++grid_mismatch;
  }

  const std::size_t dim = 6;
  std::vector<std::string> vocab;
  EmbeddingTable table(dim);
  for (int w = 0; w < 30; ++w) {
    vocab.push_back("w" + std::to_string(w));
    std::vector<double> v(dim);
    for (auto& x : v) x = 2 * rng.uniform_real() - 1;
    if (w < 27) table.add(vocab.back(), v);  // a few words lack vectors
  }
  for (int t = 0; t < trials; ++t) {
    auto doc = [&](std::size_t max_len) {
      std::vector<std::string> d;
      const auto len = 1 + rng.uniform(max_len);
      for (std::uint64_t k = 0; k < len; ++k) d.push_back(vocab[rng.uniform(vocab.size())]);
      return d;
    };
    const auto n1 = doc(12), n2 = doc(12), q1 = doc(5), q2 = doc(5);
    const auto stats = VocabularyStats::build(std::vector<std::vector<std::string>>{n1, n2}, 1, 1);
    const auto got = choose_masked_narrative(n1, n2, q1, q2, table, stats);
    const std::vector<std::vector<double>> ns = {weighted_embedding(n1, table, stats),
                                                 weighted_embedding(n2, table, stats)};
    const std::vector<std::vector<double>> qs = {weighted_embedding(q1, table, stats),
                                                 weighted_embedding(q2, table, stats)};
    SimilarityGrid direct;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) direct[i][j] = plain_cosine(ns[i], qs[j]);
    // Exact match of the decision; the grid itself is compared with a
    // rounding allowance, and near-ties are skipped for the decision.
    const double gap = std::fabs(std::min(direct[0][0], direct[0][1]) - std::min(direct[1][0], direct[1][1]));
    bool grid_ok = true;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) grid_ok = grid_ok && std::fabs(got.sim[i][j] - direct[i][j]) <= 1e-12;
    if (!grid_ok || (gap > 1e-12 && got.chosen != argmax_min(direct))) ++text_mismatch;
    const auto swapped = choose_masked_narrative(n1, n2, q2, q1, table, stats);
    if (swapped.chosen != got.chosen) ++swap_violations;
  }
  return check(grid_mismatch == 0 && text_mismatch == 0 && swap_violations == 0,
               std::to_string(trials) + " similarity quadruples: " + std::to_string(grid_mismatch) +
                   " mismatches; " + std::to_string(trials) + " text quadruples: " +
                   std::to_string(text_mismatch) + " mismatches, " +
                   std::to_string(swap_violations) + " question-swap violations");
}

// ---------------------------------------------------------------- 6

// Cyclic Jacobi eigenvalues of a symmetric matrix.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev;
  for (std::size_t i = 0; i < n; ++i) ev.push_back(a[i][i]);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

Outcome numerical_checks() {
  Rng rng(606);
  // Gradient.
  double worst_grad = 0;
  for (int draw = 0; draw < 100; ++draw) {
    std::vector<ChoiceExample> ex(30);
    for (auto& e : ex) {
      for (auto& d : e.diff) d = 2 * rng.uniform_real() - 1;
      e.label_a = rng.coin();
    }
    FeatureArray w;
    for (auto& x : w) x = 4 * rng.uniform_real() - 2;
    const double l2 = rng.uniform_real() * 0.1;
    const auto g = logistic_gradient(w, ex, l2);
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      auto hi = w, lo = w;
      hi[i] += tol::kFiniteDifferenceStep;
      lo[i] -= tol::kFiniteDifferenceStep;
      const double fd = (logistic_loss(hi, ex, l2) - logistic_loss(lo, ex, l2)) /
                        (2 * tol::kFiniteDifferenceStep);
      const double rel = std::fabs(g[i] - fd) / std::max({std::fabs(g[i]), std::fabs(fd), 1e-6});
      worst_grad = std::max(worst_grad, rel);
    }
  }
  // k-means monotonicity.
  std::size_t wcss_violations = 0;
  for (int d = 0; d < 100; ++d) {
    Matrix m(20 + rng.uniform(80), 2 + rng.uniform(5));
    for (auto& x : m.data) x = rng.uniform_real() * 10;
    const auto k = 1 + rng.uniform(std::min<std::size_t>(10, m.rows));
    const auto r = cluster_topics(m, k, rng.next());
    for (std::size_t i = 1; i < r.wcss_history.size(); ++i) {
      if (r.wcss_history[i] > r.wcss_history[i - 1] * (1 + tol::kWcssSlack)) ++wcss_violations;
    }
  }
  // Truncated SVD against Jacobi eigenvalues of A A^T.
  double worst_svd = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> a(20, std::vector<double>(30));
    std::vector<SparseVector> rows;
    for (auto& r : a) {
      std::vector<SparseVector::Entry> e;
      for (std::size_t j = 0; j < 30; ++j) {
        r[j] = rng.uniform(4) == 0 ? 0.0 : rng.uniform_real();
        if (r[j] != 0) e.emplace_back(static_cast<TermId>(j), r[j]);
      }
      rows.push_back(SparseVector::from_entries(e));
    }
    std::vector<std::vector<double>> gram(20, std::vector<double>(20, 0.0));
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j)
        for (std::size_t k = 0; k < 30; ++k) gram[i][j] += a[i][k] * a[j][k];
    const auto ev = jacobi_eigenvalues(gram);
    const std::size_t rank = 1 + rng.uniform(19);
    double tail = 0;
    for (std::size_t i = rank; i < ev.size(); ++i) tail += std::max(ev[i], 0.0);
    const auto rec = reconstruct(project_corpus(rows, 30, rank));
    double err = 0;
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 30; ++j) err += std::pow(a[i][j] - rec(i, j), 2);
    worst_svd = std::max(worst_svd, std::fabs(err - tail));
  }
  return check(worst_grad <= tol::kGradientRelative && wcss_violations == 0 && worst_svd <= tol::kSvd,
               "gradient worst relative error " + fmt(worst_grad * 1e6, 3) + "e-6 over 100 draws; " +
                   std::to_string(wcss_violations) + " WCSS increases over 100 datasets; SVD worst "
                   "|error^2 - oracle| " + fmt(worst_svd * 1e12, 3) + "e-12 over 20 matrices");
}

// ---------------------------------------------------------------- 7

Outcome metric_checks() {
  Rng rng(707);
  std::vector<int> a(10000), b(10000);
  for (auto& x : a) x = static_cast<int>(rng.uniform(2));
  for (auto& x : b) x = static_cast<int>(rng.uniform(2));
  const double identical = cohen_kappa(a, a);
  const double independent = cohen_kappa(a, b);
  const std::vector<char> hx = {'x', 'x', 'y', 'y'}, hy = {'x', 'y', 'x', 'y'};
  const double hand = cohen_kappa(hx, hy);

  double worst_bucket = 0;
  auto bucket_gap = [](const PairTypeBreakdown& br) {
    double weighted = 0;
    for (const auto& row : br.exact) weighted += br.share(row) * row.accuracy();
    return std::fabs(weighted - br.accuracy());
  };
  const auto ann = load_annotations((kData / "annotations" / "annotations.csv").string());
  for (int t = 0; t < 100; ++t) {
    std::unordered_map<std::string, bool> correct;
    for (const auto& r : ann) correct[r.instance_id] = rng.uniform_real() < 0.7;
    worst_bucket = std::max(worst_bucket, bucket_gap(pair_type_breakdown(correct, ann)));
  }
  return check(identical == 1.0 && std::fabs(independent) <= tol::kKappaIndependent && hand == 0.0 &&
                   worst_bucket <= tol::kBucketMean,
               "kappa identical " + fmt(identical, 3) + ", independent " + fmt(independent, 4) +
                   ", hand case " + fmt(hand, 3) + "; bucket mean vs overall worst gap " +
                   fmt(worst_bucket * 1e15, 2) + "e-15 over 100 labelings");
}

// ---------------------------------------------------------------- 8

Outcome determinism(const fs::path& first, const fs::path& second) {
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& e : fs::directory_iterator(first)) {
    if (!e.is_regular_file()) continue;
    ++compared;
    const auto other = second / e.path().filename();
    if (!fs::exists(other) || read_file(e.path()) != read_file(other)) {
      differing.push_back(e.path().filename().string());
    }
  }
  std::string detail = std::to_string(compared) + " artifacts compared across two runs";
  for (const auto& d : differing) detail += "; differs: " + d;
  return check(differing.empty() && compared > 0, detail);
}

// ---------------------------------------------------------------- 9

Outcome annotation_aggregates(const fs::path& run) {
  const auto t4 = parse_csv(read_file(run / artifact::pair_types));
  const auto a1 = parse_csv(read_file(run / artifact::plausibility));
  const std::map<std::string, std::string> human = {
      {"C + E", "100"}, {"C + {C, I}", "89"}, {"C + C", "84"}, {"L + {U, I}", "100"}, {"Overall", "90"}};
  const std::map<std::string, std::pair<std::string, std::string>> labels = {
      {"L", {"81", "15"}}, {"U", {"10", "21"}}, {"I", {"5", "16"}}, {"E", {"2", "41"}}, {"G", {"3", "8"}}};
  std::size_t matched = 0;
  std::vector<std::string> wrong;
  for (std::size_t i = 1; i < t4.size(); ++i) {
    const auto it = human.find(t4[i][0]);
    if (it == human.end()) continue;
    if (t4[i][2] == it->second) ++matched; else wrong.push_back(t4[i][0] + "=" + t4[i][2]);
  }
  for (std::size_t i = 1; i < a1.size(); ++i) {
    const auto it = labels.find(a1[i][0]);
    if (it == labels.end()) continue;
    if (a1[i][2] == it->second.first && a1[i][3] == it->second.second) ++matched;
    else wrong.push_back(a1[i][0] + "=" + a1[i][2] + "/" + a1[i][3]);
  }
  std::string detail = "report tables matched " + std::to_string(matched) + "/10 target rows";
  for (const auto& w : wrong) detail += "; got " + w;
  return check(matched == 10, detail);
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto run = [&](const std::string& name, auto&& fn) {
    try {
      results.emplace_back(name, fn());
    } catch (const std::exception& e) {
      results.emplace_back(name, Outcome{Outcome::fail, std::string("error: ") + e.what()});
    }
    const auto& [n, o] = results.back();
    const char* tag = o.kind == Outcome::pass ? "PASS" : o.kind == Outcome::fail ? "FAIL" : "WAIVED";
    std::cout << tag << "  " << n << ": " << o.detail << std::endl;
  };

  Scratch scratch;
  const auto config = load_config(kData / "synthetic" / "config.json");
  const auto first = scratch.path / "run1", second = scratch.path / "run2";
  run_all(config, first);
  run_all(config, second);

  run("1 dataset reproduction", dataset_reproduction);
  run("2 chance floor", [&] { return chance_floor(config, first); });
  run("3 pairing oracle", pairing_oracle);
  run("4 filtering oracle", filtering_oracle);
  run("5 masking rule", masking_rule);
  run("6 numerical checks", numerical_checks);
  run("7 metric correctness", metric_checks);
  run("8 determinism", [&] { return determinism(first, second); });
  run("9 annotation aggregates", [&] { return annotation_aggregates(first); });

  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const auto& r) { return r.second.kind == Outcome::fail; });
  std::cout << failed << " of " << results.size() << " criteria failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
