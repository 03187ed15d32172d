#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "advq/baseline.hpp"
#include "advq/cloze.hpp"
#include "advq/diversity.hpp"
#include "advq/pairing.hpp"

namespace advq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathConfig {
  std::filesystem::path corpus;
  std::filesystem::path removal_list;      // optional
  std::filesystem::path embeddings;
  std::filesystem::path sentence_vectors;  // optional; composed from embeddings when empty
  std::filesystem::path output_dir = "out";
  std::filesystem::path annotations;       // optional
  std::filesystem::path annotated_instances;  // optional gold labels for the annotations
};

struct PipelineConfig {
  std::uint64_t seed = 13;
  PathConfig paths;

  ExtractionParams extraction;
  SimilarityBounds pair_bounds{0.1, 0.8};
  SimilarityBounds question_bounds{0.8, 0.95};
  std::size_t min_df = 50;
  int ngram_max = 2;
  std::size_t top_k = 20;
  bool exact_neighbors = false;

  DiversityParams diversity;
  TrainingParams training;
  SplitSizes split;
};

// Unknown keys are rejected so typos surface. Relative paths resolve
// against the config file's directory. Throws ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);

// Throws ConfigError on unordered bounds and out-of-range values.
void validate(const PipelineConfig& config);

// Canonical JSON of every setting except paths, for provenance in reports.
std::string config_to_json(const PipelineConfig& config);

}  // namespace advq
