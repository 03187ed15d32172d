#include "advq/cloze.hpp"

#include <algorithm>
#include <array>

#include "advq/text.hpp"

namespace advq {

namespace {

constexpr std::array<std::string_view, 12> kDetectionStartWords = {
    "why", "how", "am", "is", "are", "do", "does", "did", "can", "could", "should", "would"};

constexpr std::array<std::string_view, 33> kGroundTruthStartWords = {
    "what", "when", "why", "where", "which", "who", "whom", "whose", "how",
    "am", "is", "are", "was", "were",
    "do", "does", "did", "has", "have", "had",
    "can", "could", "shall", "should", "will", "would", "may", "might", "must",
    // requests that are not interrogatives
    "any", "anyone", "help", "advice"};

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void detect_in(std::string_view text, QuestionSource source,
               std::vector<QuestionCandidate>& out) {
  const auto spans = sentence_spans(text);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto sentence = text.substr(spans[i].begin, spans[i].end - spans[i].begin);
    if (sentence.back() == '?') {
      out.push_back({std::string(sentence), source, i, Detection::terminator});
      continue;
    }
    const auto tokens = tokenize(sentence);
    if (!tokens.empty() && is_detection_start_word(tokens.front())) {
      out.push_back({std::string(sentence), source, i, Detection::start_word});
    }
  }
}

std::string mask_part(std::string_view text, QuestionSource source,
                      const std::vector<QuestionCandidate>& candidates) {
  const auto spans = sentence_spans(text);
  std::vector<bool> keep(spans.size(), true);
  for (const auto& c : candidates) {
    if (c.source == source && c.sentence_index < spans.size()) keep[c.sentence_index] = false;
  }
  return join_sentences(text, spans, keep);
}

}  // namespace

bool is_detection_start_word(std::string_view token) {
  return std::find(kDetectionStartWords.begin(), kDetectionStartWords.end(), token) !=
         kDetectionStartWords.end();
}

bool is_ground_truth_start_word(std::string_view token) {
  return token == "thoughts" ||
         std::find(kGroundTruthStartWords.begin(), kGroundTruthStartWords.end(), token) !=
             kGroundTruthStartWords.end();
}

std::vector<QuestionCandidate> detect_questions(const Post& post) {
  std::vector<QuestionCandidate> out;
  detect_in(post.title, QuestionSource::title, out);
  detect_in(post.body, QuestionSource::body, out);
  return out;
}

ClozeNarrative mask_narrative(const Post& post, const std::vector<QuestionCandidate>& candidates) {
  ClozeNarrative narrative;
  narrative.post_id = post.id;
  narrative.removed_questions = candidates;
  const auto title = mask_part(post.title, QuestionSource::title, candidates);
  const auto body = mask_part(post.body, QuestionSource::body, candidates);
  if (!title.empty() && !body.empty()) {
    narrative.masked_text = title + "\n" + body;
  } else {
    narrative.masked_text = title.empty() ? body : title;
  }
  narrative.token_count = tokenize(narrative.masked_text).size();
  return narrative;
}

bool passes_length_filter(const ClozeNarrative& narrative, LengthBounds bounds) {
  return narrative.token_count >= bounds.min_tokens &&
         narrative.token_count <= bounds.max_tokens;
}

double question_specificity(const std::vector<std::string>& question_tokens,
                            const VocabularyStats& stats) {
  double best = 0.0;
  for (const auto& token : question_tokens) best = std::max(best, stats.idf(token));
  return best;
}

std::string_view to_string(DiscardReason reason) {
  switch (reason) {
    case DiscardReason::not_question_mark: return "not_question_mark";
    case DiscardReason::start_word: return "start_word";
    case DiscardReason::too_short: return "too_short";
    case DiscardReason::not_specific: return "not_specific";
    case DiscardReason::not_selected: return "not_selected";
  }
  return "unknown";
}

GroundTruthSelection select_ground_truth_detailed(const std::vector<QuestionCandidate>& candidates,
                                                  const VocabularyStats& stats,
                                                  const SelectionParams& params, Rng& rng,
                                                  const std::string& post_id) {
  GroundTruthSelection result;
  for (const auto& candidate : candidates) {
    if (!candidate.ends_with_question_mark()) {
      result.discarded.push_back({candidate.text, DiscardReason::not_question_mark, 0.0});
      continue;
    }
    const auto tokens = tokenize(candidate.text);
    if (tokens.empty() || !is_ground_truth_start_word(tokens.front())) {
      result.discarded.push_back({candidate.text, DiscardReason::start_word, 0.0});
      continue;
    }
    const double specificity = question_specificity(tokens, stats);
    if (tokens.size() < params.min_words) {
      result.discarded.push_back({candidate.text, DiscardReason::too_short, specificity});
      continue;
    }
    if (specificity < params.specificity_threshold) {
      result.discarded.push_back({candidate.text, DiscardReason::not_specific, specificity});
      continue;
    }
    result.survivors.push_back({candidate.text, specificity, post_id});
  }
  if (!result.survivors.empty()) {
    const auto pick = rng.uniform(result.survivors.size());
    result.chosen = result.survivors[pick];
    for (std::size_t i = 0; i < result.survivors.size(); ++i) {
      if (i == pick) continue;
      const auto& s = result.survivors[i];
      result.discarded.push_back({s.text, DiscardReason::not_selected, s.specificity});
    }
  }
  return result;
}

std::optional<GroundTruthQuestion> select_ground_truth(
    const std::vector<QuestionCandidate>& candidates, const VocabularyStats& stats,
    double threshold, Rng& rng, const std::string& post_id) {
  SelectionParams params;
  params.specificity_threshold = threshold;
  return select_ground_truth_detailed(candidates, stats, params, rng, post_id).chosen;
}

ExtractionResult extract_narratives(const std::vector<Post>& posts,
                                    const ExtractionParams& params, std::uint64_t seed) {
  ExtractionResult result;
  result.counts.posts = posts.size();

  std::vector<ClozeNarrative> kept;
  for (const auto& post : posts) {
    if (is_blank(post.body)) continue;
    ++result.counts.with_bodies;
    auto candidates = detect_questions(post);
    const bool has_question = std::any_of(candidates.begin(), candidates.end(),
                                          [](const auto& c) { return c.ends_with_question_mark(); });
    if (!has_question) continue;
    ++result.counts.with_questions;
    auto narrative = mask_narrative(post, candidates);
    if (!passes_length_filter(narrative, params.length)) continue;
    ++result.counts.after_length;
    kept.push_back(std::move(narrative));
  }
  if (kept.empty()) return result;

  std::vector<std::vector<std::string>> docs;
  docs.reserve(kept.size());
  for (const auto& n : kept) {
    auto tokens = tokenize(n.masked_text);
    if (params.idf_source == IdfSource::narratives_and_questions) {
      for (const auto& q : n.removed_questions) {
        auto extra = tokenize(q.text);
        tokens.insert(tokens.end(), extra.begin(), extra.end());
      }
    }
    docs.push_back(std::move(tokens));
  }
  const auto stats = VocabularyStats::build(docs, 1, 1);

  const auto stream = derive_seed(seed, "extraction");
  for (auto& n : kept) {
    Rng rng(derive_seed(stream, n.post_id));
    auto selection =
        select_ground_truth_detailed(n.removed_questions, stats, params.selection, rng, n.post_id);
    if (!selection.chosen) continue;
    ++result.counts.with_specific_questions;
    result.narratives.push_back(
        {std::move(n), std::move(*selection.chosen), std::move(selection.discarded)});
  }
  return result;
}

}  // namespace advq
