#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "advq/baseline.hpp"
#include "advq/text.hpp"
#include "fixtures.hpp"

namespace advq {
namespace {

struct Toy {
  VocabularyStats stats;
  EmbeddingTable table{2};
};

Toy toy() {
  std::vector<std::vector<std::string>> docs = {
      {"coffee", "sleep", "tired"}, {"coffee", "habit"}, {"rent", "lease"}, {"dog", "walk"}};
  // Seven words in every document put the median idf at coffee's.
  for (auto& d : docs) {
    for (const auto* w : {"i", "the", "a", "my", "to", "and", "is"}) d.push_back(w);
  }
  Toy t{VocabularyStats::build(docs, 1, 1)};
  t.table.add("coffee", std::vector<double>{1, 0.1});
  t.table.add("sleep", std::vector<double>{0.8, 0.4});
  t.table.add("tired", std::vector<double>{0.7, 0.5});
  t.table.add("rent", std::vector<double>{0.1, 1});
  t.table.add("lease", std::vector<double>{0.2, 0.9});
  t.table.add("i", std::vector<double>{0.5, 0.5});
  return t;
}

ClozeInstance instance(const std::string& narrative, const std::string& qa, const std::string& qb,
                       Slot label = Slot::a) {
  ClozeInstance c;
  c.instance_id = "x";
  c.narrative = narrative;
  c.question_a = qa;
  c.question_b = qb;
  c.label = label;
  return c;
}

TEST(Features, HandValues) {
  const auto t = toy();
  const auto f = extract_features({"coffee", "sleep"}, {"coffee", "sleep"}, t.stats, t.table);
  EXPECT_NEAR(f.tfidf_cos, 1.0, 1e-12);
  EXPECT_NEAR(f.weighted_embed_cos, 1.0, 1e-12);
  EXPECT_NEAR(f.mean_embed_cos, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(f.content_overlap, 1.0);
  const auto g = extract_features({"coffee"}, {"rent", "lease"}, t.stats, t.table);
  EXPECT_EQ(g.tfidf_cos, 0.0);
  EXPECT_EQ(g.content_overlap, 0.0);
  EXPECT_GT(g.mean_embed_cos, 0.0);
  // "i" is in every document, so it is never a content word.
  EXPECT_EQ(extract_features({"i"}, {"i"}, t.stats, t.table).content_overlap, 0.0);
}

TEST(Features, IdenticalQuestionsScoreOneHalf) {
  const auto t = toy();
  const auto inst = instance("coffee sleep tired", "Why coffee?", "Why coffee?");
  const auto diff = difference_features(inst, t.stats, t.table);
  for (double d : diff) EXPECT_EQ(d, 0.0);
  ChoiceModel m;
  m.weights = {1.5, -2.0, 0.3, 4.0};
  EXPECT_EQ(score_difference(inst, m, t.stats, t.table), 0.5);
}

TEST(Features, SwappingSlotsNegatesTheDifference) {
  const auto t = toy();
  ChoiceModel m;
  m.weights = {1.5, -2.0, 0.3, 4.0};
  const auto ab = instance("coffee sleep tired i", "coffee sleep?", "rent lease?");
  const auto ba = instance("coffee sleep tired i", "rent lease?", "coffee sleep?");
  const auto d1 = difference_features(ab, t.stats, t.table);
  const auto d2 = difference_features(ba, t.stats, t.table);
  for (std::size_t i = 0; i < kNumFeatures; ++i) EXPECT_DOUBLE_EQ(d1[i], -d2[i]);
  EXPECT_NEAR(score_difference(ab, m, t.stats, t.table) + score_difference(ba, m, t.stats, t.table),
              1.0, 1e-15);
}

TEST(Sigmoid, SymmetricAndStable) {
  for (double x : {0.0, 0.3, 5.0, 40.0, 800.0}) {
    EXPECT_NEAR(sigmoid(-x), 1.0 - sigmoid(x), 4e-16);  // one ulp of 1.0 lost in the subtraction
    EXPECT_TRUE(std::isfinite(sigmoid(x)));
    EXPECT_TRUE(std::isfinite(sigmoid(-x)));
  }
  EXPECT_EQ(sigmoid(0.0), 0.5);
}

std::vector<ChoiceExample> random_examples(Rng& rng, std::size_t n, const FeatureArray& truth,
                                           double flip) {
  std::vector<ChoiceExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    ChoiceExample e;
    for (auto& d : e.diff) d = 2 * rng.uniform_real() - 1;
    e.label_a = choice_margin(truth, e.diff) >= 0;
    if (rng.uniform_real() < flip) e.label_a = !e.label_a;
    out.push_back(e);
  }
  return out;
}

TEST(Training, GradientMatchesFiniteDifferences) {
  Rng rng(51);
  const auto ex = random_examples(rng, 40, {1, -1, 0.5, 2}, 0.2);
  const FeatureArray w = {0.3, -0.2, 0.7, -0.1};
  const auto g = logistic_gradient(w, ex, 0.05);
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const double h = 1e-6;
    auto hi = w, lo = w;
    hi[i] += h;
    lo[i] -= h;
    const double fd = (logistic_loss(hi, ex, 0.05) - logistic_loss(lo, ex, 0.05)) / (2 * h);
    EXPECT_NEAR(g[i], fd, 1e-7);
  }
}

TEST(Training, ZeroWeightsGiveLogTwo) {
  Rng rng(52);
  const auto ex = random_examples(rng, 10, {1, 0, 0, 0}, 0.0);
  EXPECT_NEAR(logistic_loss({}, ex, 1.0), std::log(2.0), 1e-15);
}

TEST(Training, SeparableDataIsLearned) {
  Rng rng(53);
  const auto ex = random_examples(rng, 300, {2, -1, 0, 1}, 0.0);
  TrainingParams p;
  p.epochs = 500;
  p.learning_rate = 1.0;
  const auto m = train_choice_model(ex, p);
  const auto r = evaluate_examples({}, ex, m);
  EXPECT_GE(r.accuracy, 0.97);
  EXPECT_GT(m.weights[0], 0.0);
  EXPECT_LT(m.weights[1], 0.0);
  for (std::size_t i = 1; i < m.loss_history.size(); ++i) {
    EXPECT_LE(m.loss_history[i], m.loss_history[i - 1]);
  }
  EXPECT_NEAR(m.final_loss, logistic_loss(m.weights, ex, p.l2), 1e-12);
}

TEST(Training, HugeStepIsHalvedNotDiverging) {
  Rng rng(54);
  const auto ex = random_examples(rng, 100, {1, 1, -1, 0}, 0.3);
  TrainingParams p;
  p.learning_rate = 1e4;
  p.epochs = 50;
  const auto m = train_choice_model(ex, p);
  EXPECT_GT(m.step_halvings, 0u);
  EXPECT_LE(m.final_loss, std::log(2.0));
  for (double w : m.weights) EXPECT_TRUE(std::isfinite(w));
}

TEST(Evaluate, ZeroModelPicksSlotAAndCountsTies) {
  std::vector<ChoiceExample> ex(4);
  ex[0].label_a = true;
  ex[1].label_a = false;
  ex[2].label_a = true;
  ex[3].label_a = true;
  const auto r = evaluate_examples({"a", "b", "c", "d"}, ex, ChoiceModel{});
  EXPECT_EQ(r.ties, 4u);
  EXPECT_EQ(r.correct, 3u);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.75);
  EXPECT_EQ(r.predictions[1].instance_id, "b");
  EXPECT_EQ(r.predictions[1].predicted, Slot::a);
  EXPECT_THROW(evaluate_examples({}, {}, ChoiceModel{}), std::invalid_argument);
}

TEST(SplitDataset, SizesDisjointAndSeeded) {
  std::vector<int> items(100);
  for (int i = 0; i < 100; ++i) items[i] = i;
  const auto s = split_dataset(items, {50, 20, 25}, 7);
  EXPECT_EQ(s.train.size(), 50u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(s.heldout.size(), 25u);
  std::set<int> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  all.insert(s.heldout.begin(), s.heldout.end());
  EXPECT_EQ(all.size(), 95u);
  EXPECT_EQ(split_dataset(items, {50, 20, 25}, 7).train, s.train);
  EXPECT_NE(split_dataset(items, {50, 20, 25}, 8).train, s.train);
  EXPECT_THROW(split_dataset(items, {50, 30, 25}, 7), std::invalid_argument);
}

TEST(WelchTest, HandComputed) {
  const std::vector<double> a = {1, 2, 3}, b = {4, 6, 8};
  const auto r = welch_t_test(a, b);
  EXPECT_DOUBLE_EQ(r.mean_a, 2.0);
  EXPECT_DOUBLE_EQ(r.mean_b, 6.0);
  EXPECT_NEAR(r.t_statistic, -4.0 / std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(r.degrees_of_freedom, 50.0 / 17.0, 1e-12);
}

// Frozen reference values from scipy.stats.ttest_ind(equal_var=False).
TEST(WelchTest, MatchesReferenceImplementation) {
  {
    const std::vector<double> a = {1, 2, 3}, b = {4, 6, 8};
    const auto r = welch_t_test(a, b);
    EXPECT_NEAR(r.t_statistic, -3.0983866769659336, 1e-12);
    EXPECT_NEAR(r.p_value, 0.05478676604107639, 1e-10);
  }
  {
    const std::vector<double> a = {2.1, 3.4, 1.9, 5.0, 4.4}, b = {1.0, 0.5, 2.2, 1.7};
    const auto r = welch_t_test(a, b);
    EXPECT_NEAR(r.t_statistic, 2.799689102389434, 1e-12);
    EXPECT_NEAR(r.p_value, 0.029253224612413607, 1e-10);
  }
}

TEST(WelchTest, DegenerateCases) {
  const std::vector<double> ones = {1, 1}, twos = {2, 2}, one = {1};
  const auto r = welch_t_test(ones, twos);
  EXPECT_EQ(r.t_statistic, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_EQ(welch_t_test(ones, ones).p_value, 1.0);
  EXPECT_THROW(welch_t_test(one, twos), std::invalid_argument);
}

TEST(WelchTest, SwappingSamplesNegatesT) {
  Rng rng(55);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(2 + rng.uniform(10)), b(2 + rng.uniform(10));
    for (auto& x : a) x = rng.uniform_real();
    for (auto& x : b) x = rng.uniform_real() + 0.2;
    const auto ab = welch_t_test(a, b), ba = welch_t_test(b, a);
    EXPECT_NEAR(ab.t_statistic, -ba.t_statistic, 1e-12);
    EXPECT_NEAR(ab.p_value, ba.p_value, 1e-12);
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
  }
}

TEST(Concreteness, SplitsByCorrectness) {
  std::vector<std::vector<std::string>> docs(8, {"how", "do", "i"});
  docs[0].push_back("espresso");
  docs[1].push_back("espresso");
  const auto stats = VocabularyStats::build(docs, 1, 1);
  EXPECT_DOUBLE_EQ(mean_token_idf({"how", "do"}, stats), 1.0);
  EXPECT_EQ(mean_token_idf({"unknown"}, stats), 0.0);
  EXPECT_NEAR(mean_token_idf({"how", "espresso"}, stats), (1.0 + std::log(4.0) + 1.0) / 2, 1e-12);

  std::vector<ClozeInstance> inst = {
      instance("n", "How do I espresso?", "x"), instance("n", "How do espresso?", "x"),
      instance("n", "Why do I?", "x"), instance("n", "How do I?", "x"),
      instance("n", "What?", "x", Slot::b)};
  inst[4].question_b = "Do I?";
  const auto r = concreteness_analysis(inst, {true, true, false, false, true}, stats);
  EXPECT_TRUE(r.available);
  EXPECT_EQ(r.n_correct, 3u);
  EXPECT_EQ(r.n_incorrect, 2u);
  EXPECT_GT(r.test.mean_a, r.test.mean_b);
  ASSERT_EQ(r.by_interrogative.size(), 3u);
  EXPECT_EQ(r.by_interrogative[0].word, "do");
  EXPECT_EQ(r.by_interrogative[1].word, "how");
  EXPECT_EQ(r.by_interrogative[1].n, 3u);
  EXPECT_EQ(r.by_interrogative[1].correct, 2u);
  EXPECT_FALSE(concreteness_analysis({inst[0]}, {true}, stats).available);
  EXPECT_THROW(concreteness_analysis(inst, {true}, stats), std::invalid_argument);
}

}  // namespace
}  // namespace advq
