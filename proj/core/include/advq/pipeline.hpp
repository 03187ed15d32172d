#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "advq/annotation.hpp"
#include "advq/baseline.hpp"
#include "advq/config.hpp"

namespace advq {

enum class Stage { ingest, extract, pair, build, diversity, train, evaluate, report };
inline constexpr Stage kAllStages[] = {Stage::ingest, Stage::extract,   Stage::pair,
                                       Stage::build,  Stage::diversity, Stage::train,
                                       Stage::evaluate, Stage::report};

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

// An upstream artifact is absent. Maps to exit code 2.
class MissingArtifactError : public std::runtime_error {
 public:
  MissingArtifactError(Stage producer, const std::filesystem::path& path);
  Stage producer() const { return producer_; }

 private:
  Stage producer_;
};

struct StageCount {
  std::string stage;
  std::string name;
  std::size_t count = 0;
  bool operator==(const StageCount&) const = default;
};

struct StageResult {
  Stage stage = Stage::ingest;
  std::vector<StageCount> counts;
  std::vector<std::filesystem::path> artifacts;
};

// Artifact file names inside the stage directory.
namespace artifact {
inline constexpr const char* posts = "posts.jsonl";
inline constexpr const char* ingest_issues = "ingest_issues.csv";
inline constexpr const char* narratives = "narratives.jsonl";
inline constexpr const char* pairs = "pairs.jsonl";
inline constexpr const char* instances = "instances.jsonl";
inline constexpr const char* discarded = "discarded_narratives.csv";
inline constexpr const char* question_histogram = "question_similarity_histogram.csv";
inline constexpr const char* diversity_csv = "diversity.csv";
inline constexpr const char* diversity_txt = "diversity.txt";
inline constexpr const char* model = "model.json";
inline constexpr const char* split = "split.csv";
inline constexpr const char* predictions = "predictions.csv";
inline constexpr const char* evaluation = "evaluation.json";
inline constexpr const char* counts = "counts.csv";
inline constexpr const char* report = "report.txt";
inline constexpr const char* choice_accuracy = "choice_accuracy.csv";
inline constexpr const char* stage_counts = "stage_counts.csv";
inline constexpr const char* pair_types = "pair_type_accuracy.csv";
inline constexpr const char* plausibility = "plausibility_labels.csv";
}  // namespace artifact

// Runs one stage against artifacts in `stage_dir`, writes its outputs
// atomically and merges its rows into counts.csv. Throws
// MissingArtifactError, ConfigError, or std::runtime_error.
StageResult run_stage(Stage stage, const PipelineConfig& config,
                      const std::filesystem::path& stage_dir, std::ostream* log = nullptr);

std::vector<StageResult> run_all(const PipelineConfig& config,
                                 const std::filesystem::path& stage_dir,
                                 std::ostream* log = nullptr);

std::vector<StageCount> read_counts(const std::filesystem::path& path);

// Replaces the rows of every stage present in `fresh`, keeping stage order.
std::vector<StageCount> merge_counts(std::vector<StageCount> existing,
                                     const std::vector<StageCount>& fresh);
std::string counts_csv(const std::vector<StageCount>& counts);

// Label-free statistics for the choice features: unigrams over every
// instance narrative, min_df 1.
VocabularyStats feature_stats(const std::vector<ClozeInstance>& instances);

std::string model_to_json(const ChoiceModel& model);
ChoiceModel model_from_json(std::string_view text);

// Pair-type accuracy and plausibility summaries from an annotation file.
struct HumanStudy {
  PairTypeBreakdown human;
  std::optional<PairTypeBreakdown> system;  // when model predictions cover the annotations
  LabelDistribution labels;
  std::optional<Agreement> agreement;
  std::size_t unlabeled = 0;  // annotated instances missing from the gold labels
};

HumanStudy analyze_annotations(const std::vector<AnnotationRecord>& annotations,
                               const std::unordered_map<std::string, Slot>& gold,
                               const std::unordered_map<std::string, bool>* system_correct);
std::string pair_type_csv(const HumanStudy& study);
std::string plausibility_csv(const HumanStudy& study);
std::string human_study_text(const HumanStudy& study);

}  // namespace advq
