#include "advq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_set>

#include "advq/annotation.hpp"
#include "advq/diversity.hpp"
#include "advq/embedding.hpp"
#include "advq/ingest.hpp"
#include "advq/io.hpp"
#include "advq/text.hpp"
#include "json.hpp"

namespace advq {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "tfidf_cos", "weighted_embed_cos", "mean_embed_cos", "content_overlap"};

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 1); }

fs::path require(const fs::path& dir, const char* name, Stage producer) {
  auto p = dir / name;
  if (!fs::exists(p)) throw MissingArtifactError(producer, p);
  return p;
}

fs::path require_input(const fs::path& path, const char* key, Stage stage) {
  const std::string where = "'paths." + std::string(key) + "'";
  if (path.empty()) {
    throw ConfigError(where + " is required for stage " + std::string(to_string(stage)));
  }
  if (!fs::is_regular_file(path)) {
    throw ConfigError(where + " is not a readable file: " + path.string());
  }
  return path;
}

void say(std::ostream* log, Stage stage, const std::string& message) {
  if (log) *log << '[' << to_string(stage) << "] " << message << '\n';
}

EmbeddingTable load_table(const PipelineConfig& config, Stage stage, std::ostream* log) {
  const auto path = require_input(config.paths.embeddings, "embeddings", stage);
  auto loaded = load_embeddings(path.string());
  say(log, stage,
      "embeddings: " + std::to_string(loaded.table.size()) + " tokens, dim " +
          std::to_string(loaded.table.dim()) + ", " + std::to_string(loaded.malformed) +
          " malformed lines");
  return std::move(loaded.table);
}

std::vector<ClozeInstance> load_instances(const fs::path& path) {
  return read_jsonl<ClozeInstance>(path, instance_from_json);
}

void add(StageResult& r, const char* name, std::size_t count) {
  r.counts.push_back({std::string(to_string(r.stage)), name, count});
}

void write(StageResult& r, const fs::path& path, std::string_view contents) {
  write_file_atomic(path, contents);
  r.artifacts.push_back(path);
}

// ---- stages ---------------------------------------------------------------

StageResult run_ingest(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::ingest, {}, {}};
  const auto corpus = require_input(config.paths.corpus, "corpus", Stage::ingest);
  auto loaded = load_posts(corpus.string());
  RemovalList removals;
  if (!config.paths.removal_list.empty()) {
    require_input(config.paths.removal_list, "removal_list", Stage::ingest);
    removals = load_removal_list(config.paths.removal_list.string());
  }
  auto removed = apply_removal_list(std::move(loaded.posts), removals);

  std::string posts;
  for (const auto& p : removed.posts) {
    posts += serialize_post(p);
    posts += '\n';
  }
  write(r, dir / artifact::posts, posts);

  std::string issues = "source,line,detail\n";
  for (const auto& issue : loaded.summary.issues) {
    issues += csv_row({"corpus", std::to_string(issue.line_number), issue.reason});
  }
  for (const auto& id : removed.absent_ids) {
    issues += csv_row({"removal_list", "", "id not in corpus: " + id});
  }
  write(r, dir / artifact::ingest_issues, issues);

  add(r, "lines", loaded.summary.lines);
  add(r, "skipped", loaded.summary.skipped);
  add(r, "removed", removed.removed);
  add(r, "posts", removed.posts.size());
  say(log, Stage::ingest,
      std::to_string(loaded.summary.lines) + " lines, " + std::to_string(loaded.summary.skipped) +
          " skipped, " + std::to_string(removed.removed) + " removed, " +
          std::to_string(removed.posts.size()) + " posts");
  for (const auto& id : removed.absent_ids) say(log, Stage::ingest, "removal id not in corpus: " + id);
  return r;
}

StageResult run_extract(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::extract, {}, {}};
  const auto posts_path = require(dir, artifact::posts, Stage::ingest);
  // Posts were validated at ingest; reuse the same reader for the round trip.
  auto posts = load_posts(posts_path.string()).posts;
  const auto result = extract_narratives(posts, config.extraction, config.seed);
  write_jsonl(dir / artifact::narratives, result.narratives, narrative_to_json);
  r.artifacts.push_back(dir / artifact::narratives);

  const auto& c = result.counts;
  add(r, "posts", c.posts);
  add(r, "with_bodies", c.with_bodies);
  add(r, "with_questions", c.with_questions);
  add(r, "after_length", c.after_length);
  add(r, "with_specific_questions", c.with_specific_questions);
  say(log, Stage::extract,
      std::to_string(c.posts) + " posts -> " + std::to_string(c.with_specific_questions) +
          " narratives with a specific question");
  return r;
}

StageResult run_pair(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::pair, {}, {}};
  const auto narratives = read_jsonl<ExtractedNarrative>(
      require(dir, artifact::narratives, Stage::extract), narrative_from_json);
  NeighborParams params;
  params.bounds = config.pair_bounds;
  params.top_k = config.top_k;
  params.exact = config.exact_neighbors;
  const auto result = pair_narratives(narratives, config.ngram_max, config.min_df, params);
  write_jsonl(dir / artifact::pairs, result.pairs, pair_to_json);
  r.artifacts.push_back(dir / artifact::pairs);
  add(r, "candidates", result.candidates.size());
  add(r, "pairs", result.pairs.size());
  add(r, "paired_narratives", 2 * result.pairs.size());
  say(log, Stage::pair,
      std::to_string(result.candidates.size()) + " candidates, " +
          std::to_string(result.pairs.size()) + " greedy pairs");
  return r;
}

StageResult run_build(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::build, {}, {}};
  const auto narratives = read_jsonl<ExtractedNarrative>(
      require(dir, artifact::narratives, Stage::extract), narrative_from_json);
  const auto pairs =
      read_jsonl<PairCandidate>(require(dir, artifact::pairs, Stage::pair), pair_from_json);
  const auto table = load_table(config, Stage::build, log);
  const auto stats = masking_stats(narratives);

  SentenceVectorStore sentences;
  if (!config.paths.sentence_vectors.empty()) {
    require_input(config.paths.sentence_vectors, "sentence_vectors", Stage::build);
    auto loaded = load_sentence_vectors(config.paths.sentence_vectors.string());
    say(log, Stage::build,
        "sentence vectors: " + std::to_string(loaded.store.size()) + " loaded, " +
            std::to_string(loaded.malformed) + " malformed");
    sentences = std::move(loaded.store);
  } else {
    sentences = compose_sentence_vectors(narratives, table, stats);
    say(log, Stage::build, "sentence vectors composed from word embeddings");
  }

  BuildParams params;
  params.question_bounds = config.question_bounds;
  const auto result =
      build_instances(narratives, pairs, table, stats, sentences, params, config.seed);
  write_jsonl(dir / artifact::instances, result.instances, instance_to_json);
  r.artifacts.push_back(dir / artifact::instances);

  std::string discarded = "pair_id,post_id,reason\n";
  for (const auto& d : result.discarded) discarded += csv_row({d.pair_id, d.post_id, d.reason});
  write(r, dir / artifact::discarded, discarded);

  // 0.05-wide bins over [-1, 1]; the top bin is closed.
  std::array<std::size_t, 40> bins{};
  for (double s : result.question_similarities) {
    auto b = static_cast<long>(std::floor((s + 1.0) / 0.05));
    bins[static_cast<std::size_t>(std::clamp(b, 0L, 39L))]++;
  }
  std::string hist = "lower,upper,count\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    hist += csv_row({fixed(-1.0 + 0.05 * static_cast<double>(i), 2),
                     fixed(-1.0 + 0.05 * static_cast<double>(i + 1), 2), std::to_string(bins[i])});
  }
  write(r, dir / artifact::question_histogram, hist);

  const auto& c = result.counts;
  add(r, "pairs", c.pairs);
  add(r, "too_similar", c.too_similar);
  add(r, "too_dissimilar", c.too_dissimilar);
  add(r, "missing_vector", c.missing_vector);
  add(r, "paired_narratives", 2 * c.instances);
  add(r, "instances", c.instances);
  say(log, Stage::build,
      std::to_string(c.pairs) + " pairs -> " + std::to_string(c.instances) + " instances (" +
          std::to_string(c.too_similar) + " too similar, " + std::to_string(c.too_dissimilar) +
          " too dissimilar, " + std::to_string(c.missing_vector) + " missing vectors)");
  return r;
}

StageResult run_diversity(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::diversity, {}, {}};
  const auto narratives = read_jsonl<ExtractedNarrative>(
      require(dir, artifact::narratives, Stage::extract), narrative_from_json);
  if (narratives.empty()) throw std::runtime_error("no narratives to cluster");
  auto params = config.diversity;
  params.seed = derive_seed(config.seed, "diversity");
  params.k = std::min(params.k, narratives.size());
  const auto report = diversity_report(narratives, params);
  write(r, dir / artifact::diversity_csv, diversity_csv(report));
  write(r, dir / artifact::diversity_txt, diversity_text(report, narratives.size()));
  add(r, "narratives", narratives.size());
  add(r, "clusters", report.clusters.size());
  say(log, Stage::diversity,
      std::to_string(report.clusters.size()) + " clusters over " +
          std::to_string(report.dims) + " dims");
  return r;
}

StageResult run_train(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::train, {}, {}};
  const auto instances = load_instances(require(dir, artifact::instances, Stage::build));
  const auto& s = config.split;
  if (s.train + s.test + s.heldout > instances.size()) {
    throw ConfigError("split sizes " + std::to_string(s.train) + "/" + std::to_string(s.test) +
                      "/" + std::to_string(s.heldout) + " exceed the " +
                      std::to_string(instances.size()) + " available instances");
  }
  const auto table = load_table(config, Stage::train, log);
  const auto split = split_dataset(instances, s, config.seed);
  const auto stats = feature_stats(instances);
  const auto examples = make_examples(split.train, stats, table);
  auto params = config.training;
  params.seed = config.seed;
  const auto model = train_choice_model(examples, params);
  write(r, dir / artifact::model, model_to_json(model));

  std::string split_csv = "instance_id,split\n";
  auto list = [&](const std::vector<ClozeInstance>& part, const char* name) {
    for (const auto& inst : part) split_csv += csv_row({inst.instance_id, name});
  };
  list(split.train, "train");
  list(split.test, "test");
  list(split.heldout, "heldout");
  write(r, dir / artifact::split, split_csv);

  add(r, "train", split.train.size());
  add(r, "test", split.test.size());
  add(r, "heldout", split.heldout.size());
  say(log, Stage::train,
      "trained on " + std::to_string(split.train.size()) + " instances, final loss " +
          fixed(model.final_loss, 6));
  return r;
}

ordered_json accuracy_json(const AccuracyReport& report) {
  return {{"n", report.n},
          {"correct", report.correct},
          {"ties", report.ties},
          {"accuracy", report.accuracy}};
}

StageResult run_evaluate(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::evaluate, {}, {}};
  const auto instances = load_instances(require(dir, artifact::instances, Stage::build));
  const auto model = model_from_json(read_file(require(dir, artifact::model, Stage::train)));
  const auto split_rows = parse_csv(read_file(require(dir, artifact::split, Stage::train)));
  const auto table = load_table(config, Stage::evaluate, log);
  const auto stats = feature_stats(instances);

  std::unordered_map<std::string, const ClozeInstance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.instance_id, &inst);
  std::map<std::string, std::vector<ClozeInstance>> parts;
  for (std::size_t i = 1; i < split_rows.size(); ++i) {
    if (split_rows[i].size() < 2) continue;
    auto it = by_id.find(split_rows[i][0]);
    if (it == by_id.end()) {
      throw std::runtime_error("split references unknown instance " + split_rows[i][0]);
    }
    parts[split_rows[i][1]].push_back(*it->second);
  }

  ChoiceModel chance;  // zero weights
  ordered_json out;
  out["model"] = json::parse(model_to_json(model));
  std::string predictions = "instance_id,split,label,predicted,probability_a,tie\n";
  std::optional<std::pair<std::vector<ClozeInstance>, AccuracyReport>> concrete_source;
  for (const char* name : {"test", "heldout"}) {
    const auto& part = parts[name];
    if (part.empty()) continue;
    const auto report = evaluate(part, model, stats, table);
    const auto base = evaluate(part, chance, stats, table);
    out[name] = {{"baseline", accuracy_json(report)}, {"chance", accuracy_json(base)}};
    for (const auto& p : report.predictions) {
      predictions += csv_row({p.instance_id, name, std::string(to_string(p.label)),
                              std::string(to_string(p.predicted)), format_double(p.probability_a),
                              p.tie ? "1" : "0"});
    }
    add(r, name, report.n);
    say(log, Stage::evaluate,
        std::string(name) + " accuracy " + percent(report.accuracy) + "% (n=" +
            std::to_string(report.n) + ")");
    // Heldout is preferred for the error analysis when present.
    concrete_source = {part, report};
  }
  const auto chance_all = evaluate(instances, chance, stats, table);
  out["all_instances_chance"] = accuracy_json(chance_all);

  if (concrete_source) {
    const auto& [part, report] = *concrete_source;
    std::vector<bool> correct;
    for (const auto& p : report.predictions) correct.push_back(p.correct());
    const auto c = concreteness_analysis(part, correct, stats);
    ordered_json words = ordered_json::array();
    for (const auto& w : c.by_interrogative) {
      words.push_back({{"word", w.word}, {"n", w.n}, {"correct", w.correct}});
    }
    ordered_json cj = {{"available", c.available},
                       {"n_correct", c.n_correct},
                       {"n_incorrect", c.n_incorrect},
                       {"by_interrogative", words}};
    if (c.available) {
      cj["mean_idf_correct"] = c.test.mean_a;
      cj["mean_idf_incorrect"] = c.test.mean_b;
      cj["t_statistic"] = c.test.t_statistic;
      cj["degrees_of_freedom"] = c.test.degrees_of_freedom;
      cj["p_value"] = c.test.p_value;
    }
    out["concreteness"] = cj;
  }
  write(r, dir / artifact::evaluation, out.dump(2) + "\n");
  write(r, dir / artifact::predictions, predictions);
  return r;
}

std::unordered_map<std::string, Slot> gold_labels(const std::vector<ClozeInstance>& instances) {
  std::unordered_map<std::string, Slot> out;
  for (const auto& inst : instances) out.emplace(inst.instance_id, inst.label);
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

StageResult run_report(const PipelineConfig& config, const fs::path& dir, std::ostream* log) {
  StageResult r{Stage::report, {}, {}};
  const auto counts = read_counts(require(dir, artifact::counts, Stage::ingest));
  const auto eval = json::parse(read_file(require(dir, artifact::evaluation, Stage::evaluate)));

  auto count_of = [&](const char* stage, const char* name) -> std::optional<std::size_t> {
    for (const auto& c : counts) {
      if (c.stage == stage && c.name == name) return c.count;
    }
    return std::nullopt;
  };

  std::ostringstream text;
  text << "Cloze benchmark report\n======================\n\n";

  // Narrative counts per stage.
  const std::vector<std::tuple<const char*, const char*, const char*>> a2 = {
      {"Posts", "extract", "posts"},
      {"With bodies", "extract", "with_bodies"},
      {"With questions", "extract", "with_questions"},
      {"Length filter", "extract", "after_length"},
      {"With specific questions", "extract", "with_specific_questions"},
      {"Greedily paired", "pair", "paired_narratives"},
      {"Paired after question filter", "build", "paired_narratives"},
      {"Instances", "build", "instances"}};
  std::string counts_csv = "stage,count\n";
  text << "Narrative counts by stage\n";
  for (const auto& [label, stage, name] : a2) {
    const auto v = count_of(stage, name);
    const std::string shown = v ? std::to_string(*v) : "n/a";
    counts_csv += csv_row({label, shown});
    text << "  " << pad(label, 32) << lpad(shown, 10) << '\n';
  }
  text << '\n';
  write(r, dir / artifact::stage_counts, counts_csv);

  // Accuracy.
  std::string accuracy_csv = "model,split,n,accuracy_pct\n";
  text << "Choice accuracy\n";
  for (const char* part : {"test", "heldout"}) {
    if (!eval.contains(part)) continue;
    for (const char* model : {"chance", "baseline"}) {
      const auto& a = eval.at(part).at(model);
      const auto acc = percent(a.at("accuracy").get<double>());
      const char* label = std::string_view(model) == "chance" ? "Random (zero weights)"
                                                              : "Similarity baseline";
      accuracy_csv += csv_row({label, part, std::to_string(a.at("n").get<std::size_t>()), acc});
      text << "  " << pad(label, 24) << pad(part, 9) << lpad(acc, 6) << "%  (n="
           << a.at("n").get<std::size_t>() << ", ties=" << a.at("ties").get<std::size_t>()
           << ")\n";
    }
  }
  text << '\n';
  write(r, dir / artifact::choice_accuracy, accuracy_csv);

  if (eval.contains("model")) {
    const auto& w = eval.at("model").at("weights");
    text << "Baseline weights\n";
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      text << "  " << pad(kFeatureNames[i], 20) << lpad(fixed(w.at(i).get<double>(), 4), 10)
           << '\n';
    }
    text << '\n';
  }

  if (eval.contains("concreteness")) {
    const auto& c = eval.at("concreteness");
    text << "Question concreteness (mean token idf of the actual question)\n";
    if (c.at("available").get<bool>()) {
      text << "  correct   " << fixed(c.at("mean_idf_correct").get<double>(), 3) << "  (n="
           << c.at("n_correct").get<std::size_t>() << ")\n"
           << "  incorrect " << fixed(c.at("mean_idf_incorrect").get<double>(), 3) << "  (n="
           << c.at("n_incorrect").get<std::size_t>() << ")\n"
           << "  Welch t = " << fixed(c.at("t_statistic").get<double>(), 3)
           << ", df = " << fixed(c.at("degrees_of_freedom").get<double>(), 1)
           << ", p = " << fixed(c.at("p_value").get<double>(), 4) << '\n';
    } else {
      text << "  unavailable: each group needs at least 2 instances\n";
    }
    text << "  accuracy by leading word:\n";
    for (const auto& w : c.at("by_interrogative")) {
      const auto n = w.at("n").get<std::size_t>();
      const auto k = w.at("correct").get<std::size_t>();
      text << "    " << pad(w.at("word").get<std::string>(), 10)
           << lpad(percent(static_cast<double>(k) / static_cast<double>(n)), 6) << "%  (n=" << n
           << ")\n";
    }
    text << '\n';
  }

  if (!config.paths.annotations.empty()) {
    require_input(config.paths.annotations, "annotations", Stage::report);
    const auto annotations = load_annotations(config.paths.annotations.string());
    fs::path gold_path = config.paths.annotated_instances;
    if (gold_path.empty()) {
      gold_path = require(dir, artifact::instances, Stage::build);
    } else {
      require_input(gold_path, "annotated_instances", Stage::report);
    }
    const auto gold = gold_labels(load_instances(gold_path));

    std::unordered_map<std::string, bool> system;
    if (fs::exists(dir / artifact::predictions)) {
      const auto rows = parse_csv(read_file(dir / artifact::predictions));
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() >= 4) system.emplace(rows[i][0], rows[i][2] == rows[i][3]);
      }
    }
    const auto study = analyze_annotations(annotations, gold, system.empty() ? nullptr : &system);
    write(r, dir / artifact::pair_types, pair_type_csv(study));
    write(r, dir / artifact::plausibility, plausibility_csv(study));
    text << human_study_text(study) << '\n';
    add(r, "annotated_instances", study.human.n);
  }

  const auto diversity = dir / artifact::diversity_txt;
  if (fs::exists(diversity)) text << read_file(diversity);

  write(r, dir / artifact::report, text.str());
  say(log, Stage::report, "wrote " + (dir / artifact::report).string());
  return r;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::extract: return "extract";
    case Stage::pair: return "pair";
    case Stage::build: return "build";
    case Stage::diversity: return "diversity";
    case Stage::train: return "train";
    case Stage::evaluate: return "evaluate";
    case Stage::report: return "report";
  }
  return "";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (auto s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

MissingArtifactError::MissingArtifactError(Stage producer, const std::filesystem::path& path)
    : std::runtime_error("missing " + path.string() + "; run stage '" +
                         std::string(to_string(producer)) + "' first"),
      producer_(producer) {}

std::vector<StageCount> read_counts(const std::filesystem::path& path) {
  std::vector<StageCount> out;
  const auto rows = parse_csv(read_file(path));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) continue;
    out.push_back({rows[i][0], rows[i][1], static_cast<std::size_t>(std::stoull(rows[i][2]))});
  }
  return out;
}

std::vector<StageCount> merge_counts(std::vector<StageCount> existing,
                                     const std::vector<StageCount>& fresh) {
  std::unordered_set<std::string> replaced;
  for (const auto& c : fresh) replaced.insert(c.stage);
  std::erase_if(existing, [&](const StageCount& c) { return replaced.contains(c.stage); });
  existing.insert(existing.end(), fresh.begin(), fresh.end());
  auto rank = [](const std::string& stage) {
    const auto s = parse_stage(stage);
    return s ? static_cast<int>(*s) : static_cast<int>(std::size(kAllStages));
  };
  std::stable_sort(existing.begin(), existing.end(), [&](const auto& a, const auto& b) {
    return rank(a.stage) < rank(b.stage);
  });
  return existing;
}

std::string counts_csv(const std::vector<StageCount>& counts) {
  std::string out = "stage,name,count\n";
  for (const auto& c : counts) out += csv_row({c.stage, c.name, std::to_string(c.count)});
  return out;
}

StageResult run_stage(Stage stage, const PipelineConfig& config,
                      const std::filesystem::path& stage_dir, std::ostream* log) {
  validate(config);
  fs::create_directories(stage_dir);
  StageResult result;
  switch (stage) {
    case Stage::ingest: result = run_ingest(config, stage_dir, log); break;
    case Stage::extract: result = run_extract(config, stage_dir, log); break;
    case Stage::pair: result = run_pair(config, stage_dir, log); break;
    case Stage::build: result = run_build(config, stage_dir, log); break;
    case Stage::diversity: result = run_diversity(config, stage_dir, log); break;
    case Stage::train: result = run_train(config, stage_dir, log); break;
    case Stage::evaluate: result = run_evaluate(config, stage_dir, log); break;
    case Stage::report: result = run_report(config, stage_dir, log); break;
  }
  if (!result.counts.empty()) {
    const auto path = stage_dir / artifact::counts;
    auto existing = fs::exists(path) ? read_counts(path) : std::vector<StageCount>{};
    write_file_atomic(path, counts_csv(merge_counts(std::move(existing), result.counts)));
  }
  return result;
}

std::vector<StageResult> run_all(const PipelineConfig& config,
                                 const std::filesystem::path& stage_dir, std::ostream* log) {
  std::vector<StageResult> out;
  for (auto s : kAllStages) out.push_back(run_stage(s, config, stage_dir, log));
  return out;
}

VocabularyStats feature_stats(const std::vector<ClozeInstance>& instances) {
  if (instances.empty()) throw std::invalid_argument("no instances");
  std::vector<std::vector<std::string>> docs;
  docs.reserve(instances.size());
  for (const auto& inst : instances) docs.push_back(tokenize(inst.narrative));
  return VocabularyStats::build(docs, 1, 1);
}

std::string model_to_json(const ChoiceModel& model) {
  ordered_json weights = ordered_json::array();
  for (double w : model.weights) weights.push_back(w);
  ordered_json j = {{"features", kFeatureNames},
                    {"weights", weights},
                    {"bias", 0.0},
                    {"final_loss", model.final_loss},
                    {"step_halvings", model.step_halvings},
                    {"training",
                     {{"learning_rate", model.params.learning_rate},
                      {"epochs", model.params.epochs},
                      {"l2", model.params.l2},
                      {"seed", model.params.seed}}}};
  return j.dump(2) + "\n";
}

ChoiceModel model_from_json(std::string_view text) {
  const auto j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::runtime_error("model file is not JSON");
  ChoiceModel m;
  const auto& w = j.at("weights");
  if (!w.is_array() || w.size() != kNumFeatures) {
    throw std::runtime_error("model file needs " + std::to_string(kNumFeatures) + " weights");
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    m.weights[i] = w.at(i).get<double>();
    if (!std::isfinite(m.weights[i])) throw std::runtime_error("model weight is not finite");
  }
  m.final_loss = j.value("final_loss", 0.0);
  m.step_halvings = j.value("step_halvings", std::size_t{0});
  if (j.contains("training")) {
    const auto& t = j.at("training");
    m.params.learning_rate = t.value("learning_rate", m.params.learning_rate);
    m.params.epochs = t.value("epochs", m.params.epochs);
    m.params.l2 = t.value("l2", m.params.l2);
    m.params.seed = t.value("seed", m.params.seed);
  }
  return m;
}

HumanStudy analyze_annotations(const std::vector<AnnotationRecord>& annotations,
                               const std::unordered_map<std::string, Slot>& gold,
                               const std::unordered_map<std::string, bool>* system_correct) {
  HumanStudy study;
  const auto human = human_correctness(annotations, gold);
  study.human = pair_type_breakdown(human, annotations);
  study.unlabeled = study.human.skipped_unknown;
  if (system_correct) study.system = pair_type_breakdown(*system_correct, annotations);
  study.labels = label_distribution(annotations);
  study.agreement = choice_agreement(annotations);
  return study;
}

std::string pair_type_csv(const HumanStudy& study) {
  std::string out = "pair_type,share_pct,human_accuracy_pct,system_accuracy_pct\n";
  auto system_cell = [&](std::size_t index) -> std::string {
    if (!study.system || study.system->n == 0) return "";
    const auto& row = study.system->aggregate[index];
    return row.n == 0 ? "" : std::to_string(rounded_percent(row.correct, row.n));
  };
  const auto& h = study.human;
  for (std::size_t i = 0; i < h.aggregate.size(); ++i) {
    const auto& row = h.aggregate[i];
    out += csv_row({row.name, std::to_string(rounded_percent(row.n, h.n)),
                    std::to_string(rounded_percent(row.correct, row.n)), system_cell(i)});
  }
  std::string sys_overall;
  if (study.system && study.system->n > 0) {
    sys_overall = std::to_string(rounded_percent(study.system->correct, study.system->n));
  }
  out += csv_row({"Overall", std::to_string(h.n == 0 ? 0 : 100),
                  std::to_string(rounded_percent(h.correct, h.n)), sys_overall});
  return out;
}

std::string plausibility_csv(const HumanStudy& study) {
  std::string out = "label,description,actual_pct,alternative_pct\n";
  const auto& d = study.labels;
  for (auto p : kPlausibilities) {
    const auto i = static_cast<std::size_t>(p);
    out += csv_row({std::string(1, to_char(p)), std::string(description(p)),
                    std::to_string(rounded_percent(d.actual[i], d.n)),
                    std::to_string(rounded_percent(d.alternative[i], d.n))});
  }
  return out;
}

std::string human_study_text(const HumanStudy& study) {
  std::ostringstream out;
  const auto& h = study.human;
  out << "Human study (" << h.n << " annotated instances";
  if (study.unlabeled) out << ", " << study.unlabeled << " without gold labels";
  out << ")\n";
  out << "  human accuracy " << rounded_percent(h.correct, h.n) << "%\n";
  if (study.agreement) {
    out << "  choice agreement on " << study.agreement->n << " doubly annotated: "
        << percent(study.agreement->observed) << "%, kappa " << fixed(study.agreement->kappa, 2)
        << '\n';
  }
  out << "\n  " << pad("pair type", 14) << lpad("% data", 8) << lpad("human", 8);
  if (study.system) out << lpad("system", 8);
  out << '\n';
  auto line = [&](const std::string& name, std::size_t n, std::size_t hc, std::size_t sn,
                  std::size_t sc) {
    out << "  " << pad(name, 14) << lpad(std::to_string(rounded_percent(n, h.n)), 8)
        << lpad(std::to_string(rounded_percent(hc, n)), 8);
    if (study.system) {
      out << lpad(sn == 0 ? "-" : std::to_string(rounded_percent(sc, sn)), 8);
    }
    out << '\n';
  };
  for (std::size_t i = 0; i < h.aggregate.size(); ++i) {
    const auto& row = h.aggregate[i];
    const BucketRow* s = study.system ? &study.system->aggregate[i] : nullptr;
    line(row.name, row.n, row.correct, s ? s->n : 0, s ? s->correct : 0);
  }
  line("Overall", h.n, h.correct, study.system ? study.system->n : 0,
       study.system ? study.system->correct : 0);

  out << "\n  all pair types (actual + alternative):\n";
  for (const auto& row : h.exact) {
    out << "    " << pad(row.name, 8) << lpad(std::to_string(row.n), 5) << "  human "
        << lpad(std::to_string(rounded_percent(row.correct, row.n)), 3) << "%\n";
  }

  out << "\n  " << pad("label", 28) << lpad("actual", 8) << lpad("altern.", 9) << '\n';
  const auto& d = study.labels;
  for (auto p : kPlausibilities) {
    const auto i = static_cast<std::size_t>(p);
    out << "  " << pad(std::string(1, to_char(p)) + " " + std::string(description(p)), 28)
        << lpad(std::to_string(rounded_percent(d.actual[i], d.n)) + "%", 8)
        << lpad(std::to_string(rounded_percent(d.alternative[i], d.n)) + "%", 9) << '\n';
  }
  return out.str();
}

}  // namespace advq
