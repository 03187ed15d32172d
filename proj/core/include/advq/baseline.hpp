#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "advq/embedding.hpp"
#include "advq/pairing.hpp"
#include "advq/random.hpp"
#include "advq/vocabulary.hpp"

namespace advq {

inline constexpr std::size_t kNumFeatures = 4;
using FeatureArray = std::array<double, kNumFeatures>;

struct FeatureVector {
  double tfidf_cos = 0.0;
  double weighted_embed_cos = 0.0;
  double mean_embed_cos = 0.0;
  double content_overlap = 0.0;

  FeatureArray values() const {
    return {tfidf_cos, weighted_embed_cos, mean_embed_cos, content_overlap};
  }
};

// Content words are tokens whose idf exceeds the median unigram idf.
// content_overlap = |content(q) present in narrative| / |content(q)|, 0 when
// the question has no content words.
FeatureVector extract_features(const std::vector<std::string>& narrative,
                               const std::vector<std::string>& question,
                               const VocabularyStats& stats, const EmbeddingTable& table);

// f(narrative, question_a) - f(narrative, question_b).
FeatureArray difference_features(const ClozeInstance& instance, const VocabularyStats& stats,
                                 const EmbeddingTable& table);

struct TrainingParams {
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct ChoiceModel {
  FeatureArray weights{};  // no bias term: slot symmetry is structural
  TrainingParams params;
  double final_loss = 0.0;
  std::vector<double> loss_history;  // one entry per accepted epoch
  std::size_t step_halvings = 0;
};

struct ChoiceExample {
  FeatureArray diff{};
  bool label_a = true;
};

// margin = w . diff. Positive favors slot a.
double choice_margin(const FeatureArray& weights, const FeatureArray& diff);

// Logistic function, computed so that sigmoid(-x) == 1 - sigmoid(x) to
// rounding.
double sigmoid(double x);

// Probability that slot a holds the actual question.
double score_difference(const ChoiceModel& model, const FeatureArray& diff);
double score_difference(const ClozeInstance& instance, const ChoiceModel& model,
                        const VocabularyStats& stats, const EmbeddingTable& table);

// Mean logistic loss plus (l2 / 2) |w|^2.
double logistic_loss(const FeatureArray& weights, std::span<const ChoiceExample> examples,
                     double l2);
FeatureArray logistic_gradient(const FeatureArray& weights,
                               std::span<const ChoiceExample> examples, double l2);

// Full-batch gradient descent from zero weights. A step that raises the loss
// is undone and the step size halved.
ChoiceModel train_choice_model(std::span<const ChoiceExample> examples,
                               const TrainingParams& params);

std::vector<ChoiceExample> make_examples(const std::vector<ClozeInstance>& instances,
                                         const VocabularyStats& stats,
                                         const EmbeddingTable& table);

struct SplitSizes {
  std::size_t train = 8865;
  std::size_t test = 2500;
  std::size_t heldout = 10000;
};

template <typename T>
struct DatasetSplit {
  std::vector<T> train;
  std::vector<T> test;
  std::vector<T> heldout;
};

// Seeded shuffle, then contiguous slices in (train, test, heldout) order.
template <typename T>
DatasetSplit<T> split_dataset(const std::vector<T>& items, const SplitSizes& sizes,
                              std::uint64_t seed) {
  if (sizes.train + sizes.test + sizes.heldout > items.size()) {
    throw std::invalid_argument("split sizes exceed the number of instances");
  }
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(std::span<std::size_t>(order));
  DatasetSplit<T> out;
  std::size_t pos = 0;
  auto take = [&](std::vector<T>& dest, std::size_t n) {
    dest.reserve(n);
    for (std::size_t i = 0; i < n; ++i) dest.push_back(items[order[pos++]]);
  };
  take(out.train, sizes.train);
  take(out.test, sizes.test);
  take(out.heldout, sizes.heldout);
  return out;
}

struct Prediction {
  std::string instance_id;
  Slot predicted = Slot::a;
  Slot label = Slot::a;
  double probability_a = 0.5;
  bool tie = false;

  bool correct() const { return predicted == label; }
};

struct AccuracyReport {
  std::size_t n = 0;
  std::size_t correct = 0;
  std::size_t ties = 0;  // margin exactly 0, resolved to slot a
  double accuracy = 0.0;
  std::vector<Prediction> predictions;  // input order
};

// Predicts slot a iff the margin is positive or exactly zero. Throws
// std::invalid_argument on an empty set.
AccuracyReport evaluate(const std::vector<ClozeInstance>& instances, const ChoiceModel& model,
                        const VocabularyStats& stats, const EmbeddingTable& table);
AccuracyReport evaluate_examples(const std::vector<std::string>& ids,
                                 std::span<const ChoiceExample> examples,
                                 const ChoiceModel& model);

struct WelchResult {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;  // two-sided
};

// Unequal-variance two-sample t-test. Both samples need at least 2 values.
// With zero pooled standard error, t is 0 (p = 1) for equal means and
// +-infinity (p = 0) otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct InterrogativeAccuracy {
  std::string word;
  std::size_t n = 0;
  std::size_t correct = 0;
};

struct ConcretenessReport {
  bool available = false;
  std::size_t n_correct = 0;
  std::size_t n_incorrect = 0;
  WelchResult test;  // a = correctly predicted, b = incorrectly predicted
  std::vector<InterrogativeAccuracy> by_interrogative;  // sorted by word
};

// Mean idf of a question's in-vocabulary tokens; 0 when none are known.
double mean_token_idf(const std::vector<std::string>& tokens, const VocabularyStats& stats);

// Compares the mean token idf of actual questions between correctly and
// incorrectly predicted instances. `correct` is parallel to `instances`.
ConcretenessReport concreteness_analysis(const std::vector<ClozeInstance>& instances,
                                         const std::vector<bool>& correct,
                                         const VocabularyStats& stats);

}  // namespace advq
