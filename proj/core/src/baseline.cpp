#include "advq/baseline.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "advq/text.hpp"

namespace advq {

namespace {

struct TextRepresentation {
  std::vector<std::string> tokens;
  SparseVector tfidf;
  DenseVector weighted;
  DenseVector mean;
};

TextRepresentation represent(std::vector<std::string> tokens, const VocabularyStats& stats,
                             const EmbeddingTable& table) {
  TextRepresentation r;
  r.tfidf = tfidf_vector(tokens, stats);
  r.weighted = embed_doc(tokens, table, &stats, EmbedMode::tfidf_weighted);
  r.mean = embed_doc(tokens, table, nullptr, EmbedMode::mean);
  r.tokens = std::move(tokens);
  return r;
}

double content_overlap(const std::vector<std::string>& narrative,
                       const std::vector<std::string>& question, const VocabularyStats& stats) {
  const double median = stats.median_unigram_idf();
  std::unordered_set<std::string_view> content;
  for (const auto& t : question) {
    if (stats.idf(t) > median) content.insert(t);
  }
  if (content.empty()) return 0.0;
  std::unordered_set<std::string_view> present(narrative.begin(), narrative.end());
  std::size_t shared = 0;
  for (auto t : content) shared += present.contains(t) ? 1 : 0;
  return static_cast<double>(shared) / static_cast<double>(content.size());
}

FeatureVector features_of(const TextRepresentation& n, const TextRepresentation& q,
                          const VocabularyStats& stats) {
  return {cosine(n.tfidf, q.tfidf), cosine(n.weighted, q.weighted), cosine(n.mean, q.mean),
          content_overlap(n.tokens, q.tokens, stats)};
}

double softplus(double x) {
  // log(1 + exp(x)) without overflow
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

FeatureVector extract_features(const std::vector<std::string>& narrative,
                               const std::vector<std::string>& question,
                               const VocabularyStats& stats, const EmbeddingTable& table) {
  return features_of(represent(narrative, stats, table), represent(question, stats, table), stats);
}

FeatureArray difference_features(const ClozeInstance& instance, const VocabularyStats& stats,
                                 const EmbeddingTable& table) {
  const auto n = represent(tokenize(instance.narrative), stats, table);
  const auto fa = features_of(n, represent(tokenize(instance.question_a), stats, table), stats);
  const auto fb = features_of(n, represent(tokenize(instance.question_b), stats, table), stats);
  FeatureArray diff{};
  const auto a = fa.values(), b = fb.values();
  for (std::size_t i = 0; i < kNumFeatures; ++i) diff[i] = a[i] - b[i];
  return diff;
}

double choice_margin(const FeatureArray& weights, const FeatureArray& diff) {
  double m = 0.0;
  for (std::size_t i = 0; i < kNumFeatures; ++i) m += weights[i] * diff[i];
  return m;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double score_difference(const ChoiceModel& model, const FeatureArray& diff) {
  return sigmoid(choice_margin(model.weights, diff));
}

double score_difference(const ClozeInstance& instance, const ChoiceModel& model,
                        const VocabularyStats& stats, const EmbeddingTable& table) {
  return score_difference(model, difference_features(instance, stats, table));
}

double logistic_loss(const FeatureArray& weights, std::span<const ChoiceExample> examples,
                     double l2) {
  double sum = 0.0;
  for (const auto& ex : examples) {
    const double signed_margin = (ex.label_a ? 1.0 : -1.0) * choice_margin(weights, ex.diff);
    sum += softplus(-signed_margin);
  }
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  const double n = examples.empty() ? 1.0 : static_cast<double>(examples.size());
  return sum / n + 0.5 * l2 * reg;
}

FeatureArray logistic_gradient(const FeatureArray& weights,
                               std::span<const ChoiceExample> examples, double l2) {
  FeatureArray grad{};
  for (const auto& ex : examples) {
    const double y = ex.label_a ? 1.0 : -1.0;
    // d/dm softplus(-y m) = -y * sigmoid(-y m)
    const double g = -y * sigmoid(-y * choice_margin(weights, ex.diff));
    for (std::size_t i = 0; i < kNumFeatures; ++i) grad[i] += g * ex.diff[i];
  }
  const double n = examples.empty() ? 1.0 : static_cast<double>(examples.size());
  for (std::size_t i = 0; i < kNumFeatures; ++i) grad[i] = grad[i] / n + l2 * weights[i];
  return grad;
}

ChoiceModel train_choice_model(std::span<const ChoiceExample> examples,
                               const TrainingParams& params) {
  if (examples.empty()) throw std::invalid_argument("training set is empty");
  ChoiceModel model;
  model.params = params;
  double step = params.learning_rate;
  double loss = logistic_loss(model.weights, examples, params.l2);
  model.loss_history.push_back(loss);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    const auto grad = logistic_gradient(model.weights, examples, params.l2);
    // Retry with a halved step until the loss does not go up.
    for (int attempt = 0; attempt < 60; ++attempt) {
      FeatureArray next = model.weights;
      for (std::size_t i = 0; i < kNumFeatures; ++i) next[i] -= step * grad[i];
      const double next_loss = logistic_loss(next, examples, params.l2);
      if (next_loss <= loss) {
        model.weights = next;
        loss = next_loss;
        break;
      }
      step *= 0.5;
      ++model.step_halvings;
    }
    model.loss_history.push_back(loss);
  }
  model.final_loss = loss;
  return model;
}

std::vector<ChoiceExample> make_examples(const std::vector<ClozeInstance>& instances,
                                         const VocabularyStats& stats,
                                         const EmbeddingTable& table) {
  std::vector<ChoiceExample> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    out.push_back({difference_features(inst, stats, table), inst.label == Slot::a});
  }
  return out;
}

AccuracyReport evaluate_examples(const std::vector<std::string>& ids,
                                 std::span<const ChoiceExample> examples,
                                 const ChoiceModel& model) {
  if (examples.empty()) throw std::invalid_argument("evaluation set is empty");
  AccuracyReport report;
  report.n = examples.size();
  report.predictions.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const double margin = choice_margin(model.weights, examples[i].diff);
    Prediction p;
    p.instance_id = i < ids.size() ? ids[i] : std::to_string(i);
    p.probability_a = sigmoid(margin);
    p.tie = margin == 0.0;
    p.predicted = margin >= 0.0 ? Slot::a : Slot::b;
    p.label = examples[i].label_a ? Slot::a : Slot::b;
    report.correct += p.correct() ? 1 : 0;
    report.ties += p.tie ? 1 : 0;
    report.predictions.push_back(std::move(p));
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.n);
  return report;
}

AccuracyReport evaluate(const std::vector<ClozeInstance>& instances, const ChoiceModel& model,
                        const VocabularyStats& stats, const EmbeddingTable& table) {
  std::vector<std::string> ids;
  ids.reserve(instances.size());
  for (const auto& inst : instances) ids.push_back(inst.instance_id);
  const auto examples = make_examples(instances, stats, table);
  return evaluate_examples(ids, examples, model);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("welch_t_test: each sample needs at least 2 values");
  }
  auto moments = [](std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / (n - 1.0)};
  };
  const auto [mean_a, var_a] = moments(a);
  const auto [mean_b, var_b] = moments(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = var_a / na, vb = var_b / nb;
  const double se2 = va + vb;

  WelchResult r;
  r.mean_a = mean_a;
  r.mean_b = mean_b;
  const double diff = mean_a - mean_b;
  if (se2 == 0.0) {
    r.degrees_of_freedom = na + nb - 2.0;
    if (diff == 0.0) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_statistic = diff > 0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
    return r;
  }
  r.t_statistic = diff / std::sqrt(se2);
  r.degrees_of_freedom = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t dist(r.degrees_of_freedom);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_statistic)));
  r.p_value = std::min(r.p_value, 1.0);
  return r;
}

double mean_token_idf(const std::vector<std::string>& tokens, const VocabularyStats& stats) {
  double sum = 0.0;
  std::size_t known = 0;
  for (const auto& t : tokens) {
    if (auto id = stats.find(t)) {
      sum += stats.idf(*id);
      ++known;
    }
  }
  return known == 0 ? 0.0 : sum / static_cast<double>(known);
}

ConcretenessReport concreteness_analysis(const std::vector<ClozeInstance>& instances,
                                         const std::vector<bool>& correct,
                                         const VocabularyStats& stats) {
  if (instances.size() != correct.size()) {
    throw std::invalid_argument("concreteness_analysis: size mismatch");
  }
  ConcretenessReport report;
  std::vector<double> right, wrong;
  std::map<std::string, InterrogativeAccuracy> by_word;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto tokens = tokenize(instances[i].actual_question());
    (correct[i] ? right : wrong).push_back(mean_token_idf(tokens, stats));
    if (!tokens.empty()) {
      auto& row = by_word[tokens.front()];
      row.word = tokens.front();
      ++row.n;
      row.correct += correct[i] ? 1 : 0;
    }
  }
  report.n_correct = right.size();
  report.n_incorrect = wrong.size();
  for (auto& [word, row] : by_word) report.by_interrogative.push_back(row);
  if (right.size() >= 2 && wrong.size() >= 2) {
    report.available = true;
    report.test = welch_t_test(right, wrong);
  }
  return report;
}

}  // namespace advq
