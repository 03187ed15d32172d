#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advq/ingest.hpp"
#include "advq/random.hpp"
#include "advq/vocabulary.hpp"

namespace advq {

enum class QuestionSource { title, body };
enum class Detection { terminator, start_word };

struct QuestionCandidate {
  std::string text;
  QuestionSource source = QuestionSource::body;
  std::size_t sentence_index = 0;
  Detection detected_by = Detection::terminator;

  bool ends_with_question_mark() const { return !text.empty() && text.back() == '?'; }
  bool operator==(const QuestionCandidate&) const = default;
};

struct ClozeNarrative {
  std::string post_id;
  std::string masked_text;
  std::vector<QuestionCandidate> removed_questions;
  std::size_t token_count = 0;
};

struct GroundTruthQuestion {
  std::string text;
  double specificity = 0.0;
  std::string post_id;
};

// Sentence-initial words that mark a sentence as a question even without '?'.
bool is_detection_start_word(std::string_view token);
// Words a ground-truth question may start with: the interrogatives plus
// any / anyone / help / advice / thoughts.
bool is_ground_truth_start_word(std::string_view token);

// Title sentences first, then body sentences, each in order.
std::vector<QuestionCandidate> detect_questions(const Post& post);

// Removes every candidate sentence. The remaining title, if any, goes in
// front of the remaining body on its own line.
ClozeNarrative mask_narrative(const Post& post, const std::vector<QuestionCandidate>& candidates);

struct LengthBounds {
  std::size_t min_tokens = 50;
  std::size_t max_tokens = 300;
};

bool passes_length_filter(const ClozeNarrative& narrative, LengthBounds bounds = {});

// Specificity S(q): the largest idf among the question's tokens. Tokens
// missing from stats count as 0, and so does an empty question.
double question_specificity(const std::vector<std::string>& question_tokens,
                            const VocabularyStats& stats);

struct SelectionParams {
  double specificity_threshold = 5.0;
  std::size_t min_words = 5;
};

enum class DiscardReason { not_question_mark, start_word, too_short, not_specific, not_selected };
std::string_view to_string(DiscardReason reason);

struct DiscardedQuestion {
  std::string text;
  DiscardReason reason;
  double specificity = 0.0;
};

struct GroundTruthSelection {
  std::optional<GroundTruthQuestion> chosen;
  std::vector<GroundTruthQuestion> survivors;  // candidate order
  // Every candidate except the chosen one, with the reason it lost.
  std::vector<DiscardedQuestion> discarded;
};

// Filters candidates (only '?'-ending ones are eligible) and picks one
// survivor uniformly at random.
GroundTruthSelection select_ground_truth_detailed(const std::vector<QuestionCandidate>& candidates,
                                                  const VocabularyStats& stats,
                                                  const SelectionParams& params, Rng& rng,
                                                  const std::string& post_id = {});

std::optional<GroundTruthQuestion> select_ground_truth(
    const std::vector<QuestionCandidate>& candidates, const VocabularyStats& stats,
    double threshold, Rng& rng, const std::string& post_id = {});

// Corpus-level extraction with per-stage counts.

enum class IdfSource { narratives, narratives_and_questions };

struct ExtractionParams {
  LengthBounds length;
  SelectionParams selection;
  IdfSource idf_source = IdfSource::narratives;
};

struct ExtractedNarrative {
  ClozeNarrative narrative;
  GroundTruthQuestion ground_truth;
  std::vector<DiscardedQuestion> discarded;
};

struct ExtractionCounts {
  std::size_t posts = 0;
  std::size_t with_bodies = 0;
  std::size_t with_questions = 0;
  std::size_t after_length = 0;
  std::size_t with_specific_questions = 0;
};

struct ExtractionResult {
  std::vector<ExtractedNarrative> narratives;  // input post order
  ExtractionCounts counts;
};

// Ground-truth draws use a generator seeded from (seed, post id), so the
// result does not depend on processing order.
ExtractionResult extract_narratives(const std::vector<Post>& posts,
                                    const ExtractionParams& params, std::uint64_t seed);

}  // namespace advq
