#include "advq/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

namespace advq {

namespace {

struct Neighbor {
  double similarity;
  std::size_t index;
};

// Keeps the top_k in-bounds neighbors of one document.
void select_neighbors(std::vector<Neighbor>& neighbors, const std::vector<std::string>& ids,
                      std::size_t top_k) {
  auto better = [&](const Neighbor& x, const Neighbor& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return ids[x.index] < ids[y.index];
  };
  if (top_k > 0 && neighbors.size() > top_k) {
    std::partial_sort(neighbors.begin(), neighbors.begin() + static_cast<std::ptrdiff_t>(top_k),
                      neighbors.end(), better);
    neighbors.resize(top_k);
  }
}

}  // namespace

std::vector<PairCandidate> build_pair_candidates(const std::vector<std::string>& ids,
                                                 const std::vector<SparseVector>& vectors,
                                                 const NeighborParams& params) {
  if (ids.size() != vectors.size()) {
    throw std::invalid_argument("build_pair_candidates: ids and vectors differ in length");
  }
  const std::size_t n = ids.size();
  if (n < 2) return {};

  std::vector<std::vector<Neighbor>> neighbors(n);
  if (params.exact) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double s = cosine(vectors[i], vectors[j]);
        if (!params.bounds.contains(s)) continue;
        neighbors[i].push_back({s, j});
        neighbors[j].push_back({s, i});
      }
    }
  } else {
    // Vectors are unit length (or empty), so the accumulated dot product is
    // the cosine. Accumulating in term-id order reproduces the merge-based
    // dot product bit for bit.
    TermId max_term = 0;
    for (const auto& v : vectors) {
      if (!v.empty()) max_term = std::max(max_term, v.entries().back().first);
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> postings(max_term + 1);
    std::vector<double> norms(n);
    for (std::size_t d = 0; d < n; ++d) {
      norms[d] = vectors[d].norm();
      for (const auto& [term, w] : vectors[d].entries()) postings[term].emplace_back(d, w);
    }
    std::vector<double> score(n, 0.0);
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [term, w] : vectors[i].entries()) {
        for (const auto& [j, wj] : postings[term]) {
          if (j == i) continue;
          if (score[j] == 0.0) touched.push_back(j);
          score[j] += w * wj;
        }
      }
      for (std::size_t j : touched) {
        const double denom = norms[i] * norms[j];
        const double s = std::clamp(score[j] / denom, -1.0, 1.0);
        if (params.bounds.contains(s)) neighbors[i].push_back({s, j});
        score[j] = 0.0;
      }
      touched.clear();
      if (params.bounds.contains(0.0)) {
        // Zero-similarity neighbors never show up in the postings walk.
        std::vector<bool> seen(n, false);
        for (const auto& nb : neighbors[i]) seen[nb.index] = true;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != i && !seen[j] && cosine(vectors[i], vectors[j]) == 0.0) {
            neighbors[i].push_back({0.0, j});
          }
        }
      }
    }
  }

  std::unordered_set<std::uint64_t> emitted;
  std::vector<PairCandidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    select_neighbors(neighbors[i], ids, params.top_k);
    for (const auto& nb : neighbors[i]) {
      const auto lo = std::min(i, nb.index), hi = std::max(i, nb.index);
      if (!emitted.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second) continue;
      const bool ordered = ids[i] < ids[nb.index];
      out.push_back({ordered ? ids[i] : ids[nb.index], ordered ? ids[nb.index] : ids[i],
                     nb.similarity});
    }
  }
  std::sort(out.begin(), out.end(), [](const PairCandidate& x, const PairCandidate& y) {
    return std::tie(x.id_a, x.id_b) < std::tie(y.id_a, y.id_b);
  });
  return out;
}

std::vector<PairCandidate> build_pair_candidates(const std::vector<TokenizedDoc>& narratives,
                                                 const VocabularyStats& stats,
                                                 const NeighborParams& params) {
  std::vector<std::string> ids;
  std::vector<SparseVector> vectors;
  ids.reserve(narratives.size());
  vectors.reserve(narratives.size());
  for (const auto& doc : narratives) {
    ids.push_back(doc.doc_id);
    vectors.push_back(tfidf_vector(doc.tokens, stats));
  }
  return build_pair_candidates(ids, vectors, params);
}

std::vector<PairCandidate> greedy_pair(std::vector<PairCandidate> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const PairCandidate& x, const PairCandidate& y) {
              if (x.similarity != y.similarity) return x.similarity > y.similarity;
              return std::tie(x.id_a, x.id_b) < std::tie(y.id_a, y.id_b);
            });
  std::unordered_set<std::string> used;
  std::vector<PairCandidate> accepted;
  for (auto& c : candidates) {
    if (c.id_a == c.id_b || used.contains(c.id_a) || used.contains(c.id_b)) continue;
    used.insert(c.id_a);
    used.insert(c.id_b);
    accepted.push_back(std::move(c));
  }
  return accepted;
}

int choose_by_similarity(const SimilarityGrid& sim) {
  const double min1 = std::min(sim[0][0], sim[0][1]);
  const double min2 = std::min(sim[1][0], sim[1][1]);
  return min2 > min1 ? 2 : 1;
}

MaskingChoice choose_masked_narrative(const std::vector<std::string>& narrative1,
                                      const std::vector<std::string>& narrative2,
                                      const std::vector<std::string>& question1,
                                      const std::vector<std::string>& question2,
                                      const EmbeddingTable& table, const VocabularyStats& stats) {
  const auto mode = EmbedMode::tfidf_weighted;
  const std::array<DenseVector, 2> n{embed_doc(narrative1, table, &stats, mode),
                                     embed_doc(narrative2, table, &stats, mode)};
  const std::array<DenseVector, 2> q{embed_doc(question1, table, &stats, mode),
                                     embed_doc(question2, table, &stats, mode)};
  MaskingChoice choice;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) choice.sim[i][j] = cosine(n[i], q[j]);
  }
  choice.chosen = choose_by_similarity(choice.sim);
  const auto& row = choice.sim[choice.chosen - 1];
  choice.min_similarity = std::min(row[0], row[1]);
  return choice;
}

bool SentenceVectorStore::add(std::string id, const DenseVector& vector) {
  if (vector.dim() == 0 || vector.is_zero()) return false;
  if (dim_ == 0) dim_ = vector.dim();
  if (vector.dim() != dim_) return false;
  return vectors_.emplace(std::move(id), vector.normalized()).second;
}

const DenseVector* SentenceVectorStore::find(const std::string& id) const {
  auto it = vectors_.find(id);
  return it == vectors_.end() ? nullptr : &it->second;
}

SentenceVectorLoad load_sentence_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read sentence vector file: " + path);
  SentenceVectorLoad load;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;
    std::vector<double> values;
    std::string field;
    bool ok = true;
    while (fields >> field) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size() || !std::isfinite(v)) {
        ok = false;
        break;
      }
      values.push_back(v);
    }
    if (!ok || values.empty() || !load.store.add(id, DenseVector(std::move(values)))) {
      ++load.malformed;
    }
  }
  return load;
}

std::string_view to_string(QuestionPairVerdict verdict) {
  switch (verdict) {
    case QuestionPairVerdict::keep: return "keep";
    case QuestionPairVerdict::too_similar: return "too_similar";
    case QuestionPairVerdict::too_dissimilar: return "too_dissimilar";
    case QuestionPairVerdict::missing_vector: return "missing_vector";
  }
  return "unknown";
}

QuestionPairCheck check_question_pair(const std::string& q1_id, const std::string& q2_id,
                                      const SentenceVectorStore& store, SimilarityBounds bounds) {
  const auto* v1 = store.find(q1_id);
  const auto* v2 = store.find(q2_id);
  if (v1 == nullptr || v2 == nullptr) return {QuestionPairVerdict::missing_vector, 0.0};
  const double s = cosine(*v1, *v2);
  if (s > bounds.upper) return {QuestionPairVerdict::too_similar, s};
  if (s < bounds.lower) return {QuestionPairVerdict::too_dissimilar, s};
  return {QuestionPairVerdict::keep, s};
}

bool filter_question_pair(const std::string& q1_id, const std::string& q2_id,
                          const SentenceVectorStore& store, SimilarityBounds bounds) {
  return check_question_pair(q1_id, q2_id, store, bounds).verdict == QuestionPairVerdict::keep;
}

std::string_view to_string(Slot slot) { return slot == Slot::a ? "a" : "b"; }

std::optional<Slot> parse_slot(std::string_view text) {
  if (text == "a" || text == "A") return Slot::a;
  if (text == "b" || text == "B") return Slot::b;
  return std::nullopt;
}

ClozeInstance assemble_instance(const NarrativePair& pair, int chosen, Rng& rng,
                                double min_similarity, double question_similarity) {
  if (chosen != 1 && chosen != 2) throw std::invalid_argument("chosen must be 1 or 2");
  const auto& source = chosen == 1 ? *pair.n1 : *pair.n2;
  const auto& alternative = chosen == 1 ? *pair.n2 : *pair.n1;
  ClozeInstance instance;
  instance.source_post_id = source.narrative.post_id;
  instance.alternative_post_id = alternative.narrative.post_id;
  instance.instance_id = instance.source_post_id + "_" + instance.alternative_post_id;
  instance.narrative = source.narrative.masked_text;
  instance.label = rng.coin() ? Slot::a : Slot::b;
  if (instance.label == Slot::a) {
    instance.question_a = source.ground_truth.text;
    instance.question_b = alternative.ground_truth.text;
  } else {
    instance.question_a = alternative.ground_truth.text;
    instance.question_b = source.ground_truth.text;
  }
  instance.diagnostics = {pair.pair_similarity, min_similarity, question_similarity};
  return instance;
}

PairingResult pair_narratives(const std::vector<ExtractedNarrative>& narratives, int ngram_max,
                              std::size_t min_df, const NeighborParams& params) {
  PairingResult result;
  if (narratives.size() < 2) return result;
  std::vector<TokenizedDoc> docs;
  docs.reserve(narratives.size());
  for (const auto& n : narratives) {
    docs.push_back(tokenize_doc(n.narrative.post_id, n.narrative.masked_text));
  }
  const auto stats = VocabularyStats::build(docs, ngram_max, min_df);
  result.candidates = build_pair_candidates(docs, stats, params);
  result.pairs = greedy_pair(result.candidates);
  return result;
}

VocabularyStats masking_stats(const std::vector<ExtractedNarrative>& narratives) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(narratives.size());
  for (const auto& n : narratives) docs.push_back(tokenize(n.narrative.masked_text));
  return VocabularyStats::build(docs, 1, 1);
}

SentenceVectorStore compose_sentence_vectors(const std::vector<ExtractedNarrative>& narratives,
                                             const EmbeddingTable& table,
                                             const VocabularyStats& stats) {
  SentenceVectorStore store;
  for (const auto& n : narratives) {
    store.add(n.narrative.post_id, embed_doc(tokenize(n.ground_truth.text), table, &stats,
                                             EmbedMode::tfidf_weighted));
  }
  return store;
}

BuildResult build_instances(const std::vector<ExtractedNarrative>& narratives,
                            const std::vector<PairCandidate>& pairs, const EmbeddingTable& table,
                            const VocabularyStats& stats, const SentenceVectorStore& sentences,
                            const BuildParams& params, std::uint64_t seed) {
  std::unordered_map<std::string, const ExtractedNarrative*> by_id;
  for (const auto& n : narratives) by_id.emplace(n.narrative.post_id, &n);

  BuildResult result;
  const auto stream = derive_seed(seed, "assembly");
  for (const auto& p : pairs) {
    const auto it1 = by_id.find(p.id_a);
    const auto it2 = by_id.find(p.id_b);
    if (it1 == by_id.end() || it2 == by_id.end()) {
      throw std::runtime_error("pair references unknown narrative: " + p.id_a + "/" + p.id_b);
    }
    ++result.counts.pairs;
    const std::string pair_id = p.id_a + "_" + p.id_b;
    const NarrativePair pair{it1->second, it2->second, p.similarity};

    const auto check = check_question_pair(p.id_a, p.id_b, sentences, params.question_bounds);
    if (check.verdict != QuestionPairVerdict::missing_vector) {
      result.question_similarities.push_back(check.similarity);
    }
    if (check.verdict != QuestionPairVerdict::keep) {
      switch (check.verdict) {
        case QuestionPairVerdict::too_similar: ++result.counts.too_similar; break;
        case QuestionPairVerdict::too_dissimilar: ++result.counts.too_dissimilar; break;
        default: ++result.counts.missing_vector; break;
      }
      const std::string reason(to_string(check.verdict));
      result.discarded.push_back({pair_id, p.id_a, reason});
      result.discarded.push_back({pair_id, p.id_b, reason});
      continue;
    }

    const auto choice = choose_masked_narrative(
        tokenize(pair.n1->narrative.masked_text), tokenize(pair.n2->narrative.masked_text),
        tokenize(pair.n1->ground_truth.text), tokenize(pair.n2->ground_truth.text), table, stats);
    Rng rng(derive_seed(stream, pair_id));
    result.instances.push_back(
        assemble_instance(pair, choice.chosen, rng, choice.min_similarity, check.similarity));
    result.discarded.push_back(
        {pair_id, choice.chosen == 1 ? p.id_b : p.id_a, "masked_out"});
    ++result.counts.instances;
  }
  return result;
}

}  // namespace advq
