#include "advq/config.hpp"

#include <cmath>
#include <set>

#include "advq/io.hpp"
#include "json.hpp"

namespace advq {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + where + key + "'");
  }
}

const json* section(const json& root, const char* name) {
  if (!root.contains(name)) return nullptr;
  const auto& s = root.at(name);
  if (!s.is_object()) throw ConfigError(std::string("'") + name + "' must be an object");
  return &s;
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + where + key + "'");
  }
}

void read_count(const json& obj, const char* key, std::size_t& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("'" + where + key + "' must be a non-negative integer");
  }
  out = v.get<std::size_t>();
}

void read_bounds(const json& obj, const char* key, SimilarityBounds& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("'" + where + key + "' must be [lower, upper]");
  }
  out.lower = v[0].get<double>();
  out.upper = v[1].get<double>();
}

void read_path(const json& obj, const char* key, std::filesystem::path& out,
               const std::filesystem::path& base) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (v.is_null()) {
    out.clear();
    return;
  }
  if (!v.is_string()) throw ConfigError(std::string("'paths.") + key + "' must be a string");
  std::filesystem::path p = v.get<std::string>();
  out = p.empty() || p.is_absolute() ? p : base / p;
}

}  // namespace

PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (root.is_discarded() || !root.is_object()) throw ConfigError("config is not a JSON object");
  reject_unknown(root, "", {"seed", "paths", "thresholds", "diversity", "baseline", "split"});

  PipelineConfig c;
  if (root.contains("seed")) {
    const auto& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  if (const auto* p = section(root, "paths")) {
    reject_unknown(*p, "paths.",
                   {"corpus", "removal_list", "embeddings", "sentence_vectors", "output_dir",
                    "annotations", "annotated_instances"});
    read_path(*p, "corpus", c.paths.corpus, base_dir);
    read_path(*p, "removal_list", c.paths.removal_list, base_dir);
    read_path(*p, "embeddings", c.paths.embeddings, base_dir);
    read_path(*p, "sentence_vectors", c.paths.sentence_vectors, base_dir);
    read_path(*p, "output_dir", c.paths.output_dir, base_dir);
    read_path(*p, "annotations", c.paths.annotations, base_dir);
    read_path(*p, "annotated_instances", c.paths.annotated_instances, base_dir);
  } else {
    c.paths.output_dir = base_dir / c.paths.output_dir;
  }
  if (const auto* t = section(root, "thresholds")) {
    const std::string w = "thresholds.";
    reject_unknown(*t, w,
                   {"specificity", "min_question_words", "narrative_length", "pair_bounds",
                    "question_bounds", "min_df", "ngram_max", "top_k", "exact_neighbors",
                    "idf_source"});
    read(*t, "specificity", c.extraction.selection.specificity_threshold, w);
    read_count(*t, "min_question_words", c.extraction.selection.min_words, w);
    if (t->contains("narrative_length")) {
      const auto& v = t->at("narrative_length");
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
          !v[1].is_number_integer() || v[0].get<std::int64_t>() < 0) {
        throw ConfigError("'thresholds.narrative_length' must be [min, max] token counts");
      }
      c.extraction.length.min_tokens = v[0].get<std::size_t>();
      c.extraction.length.max_tokens = v[1].get<std::size_t>();
    }
    read_bounds(*t, "pair_bounds", c.pair_bounds, w);
    read_bounds(*t, "question_bounds", c.question_bounds, w);
    read_count(*t, "min_df", c.min_df, w);
    read(*t, "ngram_max", c.ngram_max, w);
    read_count(*t, "top_k", c.top_k, w);
    read(*t, "exact_neighbors", c.exact_neighbors, w);
    if (t->contains("idf_source")) {
      std::string s;
      read(*t, "idf_source", s, w);
      if (s == "narratives") {
        c.extraction.idf_source = IdfSource::narratives;
      } else if (s == "narratives_and_questions") {
        c.extraction.idf_source = IdfSource::narratives_and_questions;
      } else {
        throw ConfigError("'thresholds.idf_source' must be narratives or narratives_and_questions");
      }
    }
  }
  if (const auto* d = section(root, "diversity")) {
    const std::string w = "diversity.";
    reject_unknown(*d, w, {"dims", "k", "max_iter", "top_n", "min_df", "noun_verb_filter"});
    read_count(*d, "dims", c.diversity.dims, w);
    read_count(*d, "k", c.diversity.k, w);
    read_count(*d, "max_iter", c.diversity.max_iter, w);
    read_count(*d, "top_n", c.diversity.top_n, w);
    read_count(*d, "min_df", c.diversity.min_df, w);
    read(*d, "noun_verb_filter", c.diversity.noun_verb_filter, w);
  }
  if (const auto* b = section(root, "baseline")) {
    const std::string w = "baseline.";
    reject_unknown(*b, w, {"learning_rate", "epochs", "l2"});
    read(*b, "learning_rate", c.training.learning_rate, w);
    read_count(*b, "epochs", c.training.epochs, w);
    read(*b, "l2", c.training.l2, w);
  }
  if (const auto* s = section(root, "split")) {
    const std::string w = "split.";
    reject_unknown(*s, w, {"train", "test", "heldout"});
    read_count(*s, "train", c.split.train, w);
    read_count(*s, "test", c.split.test, w);
    read_count(*s, "heldout", c.split.heldout, w);
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  try {
    return parse_config(text, base);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const PipelineConfig& c) {
  auto bounds = [](const SimilarityBounds& b, const char* name) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || b.lower > b.upper) {
      throw ConfigError(std::string("'") + name + "' must satisfy lower <= upper");
    }
    if (b.lower < -1.0 || b.upper > 1.0) {
      throw ConfigError(std::string("'") + name + "' must lie within [-1, 1]");
    }
  };
  bounds(c.pair_bounds, "thresholds.pair_bounds");
  bounds(c.question_bounds, "thresholds.question_bounds");
  if (c.extraction.length.min_tokens > c.extraction.length.max_tokens) {
    throw ConfigError("'thresholds.narrative_length' must satisfy min <= max");
  }
  if (!std::isfinite(c.extraction.selection.specificity_threshold)) {
    throw ConfigError("'thresholds.specificity' must be finite");
  }
  if (c.ngram_max != 1 && c.ngram_max != 2) throw ConfigError("'thresholds.ngram_max' must be 1 or 2");
  if (c.min_df < 1) throw ConfigError("'thresholds.min_df' must be at least 1");
  if (c.diversity.dims < 1) throw ConfigError("'diversity.dims' must be at least 1");
  if (c.diversity.k < 1) throw ConfigError("'diversity.k' must be at least 1");
  if (c.diversity.min_df < 1) throw ConfigError("'diversity.min_df' must be at least 1");
  if (!(c.training.learning_rate > 0.0) || !std::isfinite(c.training.learning_rate)) {
    throw ConfigError("'baseline.learning_rate' must be positive");
  }
  if (!(c.training.l2 >= 0.0) || !std::isfinite(c.training.l2)) {
    throw ConfigError("'baseline.l2' must be non-negative");
  }
  if (c.split.train == 0) throw ConfigError("'split.train' must be positive");
}

std::string config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["thresholds"] = {
      {"specificity", c.extraction.selection.specificity_threshold},
      {"min_question_words", c.extraction.selection.min_words},
      {"narrative_length", {c.extraction.length.min_tokens, c.extraction.length.max_tokens}},
      {"pair_bounds", {c.pair_bounds.lower, c.pair_bounds.upper}},
      {"question_bounds", {c.question_bounds.lower, c.question_bounds.upper}},
      {"min_df", c.min_df},
      {"ngram_max", c.ngram_max},
      {"top_k", c.top_k},
      {"exact_neighbors", c.exact_neighbors},
      {"idf_source", c.extraction.idf_source == IdfSource::narratives ? "narratives"
                                                                     : "narratives_and_questions"}};
  j["diversity"] = {{"dims", c.diversity.dims},       {"k", c.diversity.k},
                    {"max_iter", c.diversity.max_iter}, {"top_n", c.diversity.top_n},
                    {"min_df", c.diversity.min_df},
                    {"noun_verb_filter", c.diversity.noun_verb_filter}};
  j["baseline"] = {{"learning_rate", c.training.learning_rate},
                   {"epochs", c.training.epochs},
                   {"l2", c.training.l2}};
  j["split"] = {{"train", c.split.train}, {"test", c.split.test}, {"heldout", c.split.heldout}};
  return j.dump(2);
}

}  // namespace advq
