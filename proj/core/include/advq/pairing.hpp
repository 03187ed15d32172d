#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "advq/cloze.hpp"
#include "advq/embedding.hpp"
#include "advq/random.hpp"
#include "advq/vocabulary.hpp"

namespace advq {

struct SimilarityBounds {
  double lower = 0.0;
  double upper = 1.0;

  bool contains(double s) const { return s >= lower && s <= upper; }
};

struct PairCandidate {
  std::string id_a;  // id_a < id_b
  std::string id_b;
  double similarity = 0.0;

  bool operator==(const PairCandidate&) const = default;
};

struct NeighborParams {
  SimilarityBounds bounds{0.1, 0.8};
  std::size_t top_k = 20;  // 0 keeps every in-bounds neighbor
  bool exact = false;      // brute-force all pairs instead of the inverted index
};

// For each document, its top_k most similar in-bounds neighbors (ties by id)
// become canonical candidates. Out-of-bounds similarities are dropped before
// the top_k cut. Output is deduplicated and sorted by (id_a, id_b).
std::vector<PairCandidate> build_pair_candidates(const std::vector<std::string>& ids,
                                                 const std::vector<SparseVector>& vectors,
                                                 const NeighborParams& params);

std::vector<PairCandidate> build_pair_candidates(const std::vector<TokenizedDoc>& narratives,
                                                 const VocabularyStats& stats,
                                                 const NeighborParams& params);

// Greedy maximal matching: candidates in descending similarity, ties by
// (id_a, id_b); a candidate is accepted when both ends are still free.
std::vector<PairCandidate> greedy_pair(std::vector<PairCandidate> candidates);

// sim[i][j] = similarity of narrative i+1 with question j+1.
using SimilarityGrid = std::array<std::array<double, 2>, 2>;

// argmax over narratives of min over the two questions; 1 on ties.
int choose_by_similarity(const SimilarityGrid& sim);

struct MaskingChoice {
  int chosen = 1;
  SimilarityGrid sim{};
  double min_similarity = 0.0;  // of the chosen narrative
};

// Narratives and questions are embedded as tf-idf weighted word vectors.
MaskingChoice choose_masked_narrative(const std::vector<std::string>& narrative1,
                                      const std::vector<std::string>& narrative2,
                                      const std::vector<std::string>& question1,
                                      const std::vector<std::string>& question2,
                                      const EmbeddingTable& table, const VocabularyStats& stats);

// Unit-norm sentence vectors keyed by question id.
class SentenceVectorStore {
 public:
  // Normalizes on insert. Zero vectors and dimension mismatches are rejected.
  bool add(std::string id, const DenseVector& vector);
  const DenseVector* find(const std::string& id) const;
  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, DenseVector> vectors_;
};

struct SentenceVectorLoad {
  SentenceVectorStore store;
  std::size_t malformed = 0;
};

// Lines "question_id v1 ... vd".
SentenceVectorLoad load_sentence_vectors(const std::string& path);

enum class QuestionPairVerdict { keep, too_similar, too_dissimilar, missing_vector };
std::string_view to_string(QuestionPairVerdict verdict);

struct QuestionPairCheck {
  QuestionPairVerdict verdict = QuestionPairVerdict::missing_vector;
  double similarity = 0.0;
};

QuestionPairCheck check_question_pair(const std::string& q1_id, const std::string& q2_id,
                                      const SentenceVectorStore& store,
                                      SimilarityBounds bounds = {0.8, 0.95});

// True iff both vectors exist and their cosine lies in bounds.
bool filter_question_pair(const std::string& q1_id, const std::string& q2_id,
                          const SentenceVectorStore& store, SimilarityBounds bounds = {0.8, 0.95});

struct NarrativePair {
  const ExtractedNarrative* n1 = nullptr;
  const ExtractedNarrative* n2 = nullptr;
  double pair_similarity = 0.0;
};

enum class Slot { a, b };
std::string_view to_string(Slot slot);
std::optional<Slot> parse_slot(std::string_view text);
inline Slot other(Slot s) { return s == Slot::a ? Slot::b : Slot::a; }

struct InstanceDiagnostics {
  double pair_similarity = 0.0;
  double min_question_narrative_similarity = 0.0;
  double question_pair_similarity = 0.0;
};

struct ClozeInstance {
  std::string instance_id;
  std::string narrative;
  std::string question_a;
  std::string question_b;
  Slot label = Slot::a;  // slot holding the question actually asked
  std::string source_post_id;
  std::string alternative_post_id;
  InstanceDiagnostics diagnostics;

  const std::string& question(Slot s) const { return s == Slot::a ? question_a : question_b; }
  const std::string& actual_question() const { return question(label); }
  const std::string& alternative_question() const { return question(other(label)); }
};

// The chosen narrative provides the text; a fair coin places its question in
// slot a or b.
ClozeInstance assemble_instance(const NarrativePair& pair, int chosen, Rng& rng,
                                double min_similarity = 0.0, double question_similarity = 0.0);

// Corpus-level drivers.

struct PairingResult {
  std::vector<PairCandidate> candidates;
  std::vector<PairCandidate> pairs;
};

// tf-idf stats (ngram_max, min_df) are fit on the narratives themselves.
PairingResult pair_narratives(const std::vector<ExtractedNarrative>& narratives, int ngram_max,
                              std::size_t min_df, const NeighborParams& params);

struct BuildParams {
  SimilarityBounds question_bounds{0.8, 0.95};
};

struct DiscardedNarrative {
  std::string pair_id;
  std::string post_id;
  std::string reason;  // "masked_out" or the question-pair verdict
};

struct BuildCounts {
  std::size_t pairs = 0;
  std::size_t too_similar = 0;
  std::size_t too_dissimilar = 0;
  std::size_t missing_vector = 0;
  std::size_t instances = 0;
};

struct BuildResult {
  std::vector<ClozeInstance> instances;  // pair order
  std::vector<DiscardedNarrative> discarded;
  BuildCounts counts;
  std::vector<double> question_similarities;  // every checked pair, pair order
};

// Idf for the weighted embeddings comes from the narrative corpus.
VocabularyStats masking_stats(const std::vector<ExtractedNarrative>& narratives);

// Fallback sentence vectors: normalized tf-idf weighted word embeddings of
// each ground-truth question, keyed by post id.
SentenceVectorStore compose_sentence_vectors(const std::vector<ExtractedNarrative>& narratives,
                                             const EmbeddingTable& table,
                                             const VocabularyStats& stats);

BuildResult build_instances(const std::vector<ExtractedNarrative>& narratives,
                            const std::vector<PairCandidate>& pairs, const EmbeddingTable& table,
                            const VocabularyStats& stats, const SentenceVectorStore& sentences,
                            const BuildParams& params, std::uint64_t seed);

}  // namespace advq
