#include "advq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace advq {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string_view source_name(QuestionSource s) { return s == QuestionSource::title ? "title" : "body"; }

QuestionSource parse_source(const std::string& s) {
  if (s == "title") return QuestionSource::title;
  if (s == "body") return QuestionSource::body;
  throw std::runtime_error("unknown question source '" + s + "'");
}

std::string_view detection_name(Detection d) {
  return d == Detection::terminator ? "terminator" : "start_word";
}

Detection parse_detection(const std::string& s) {
  if (s == "terminator") return Detection::terminator;
  if (s == "start_word") return Detection::start_word;
  throw std::runtime_error("unknown detection kind '" + s + "'");
}

DiscardReason parse_reason(const std::string& s) {
  for (auto r : {DiscardReason::not_question_mark, DiscardReason::start_word,
                 DiscardReason::too_short, DiscardReason::not_specific,
                 DiscardReason::not_selected}) {
    if (to_string(r) == s) return r;
  }
  throw std::runtime_error("unknown discard reason '" + s + "'");
}

json parse_object(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::runtime_error("not a JSON object");
  return j;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read error on " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write error on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
      row.clear();
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw std::runtime_error("CSV: unterminated quoted field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string narrative_to_json(const ExtractedNarrative& n) {
  ordered_json removed = ordered_json::array();
  for (const auto& q : n.narrative.removed_questions) {
    removed.push_back({{"text", q.text},
                       {"source", source_name(q.source)},
                       {"sentence_index", q.sentence_index},
                       {"detected_by", detection_name(q.detected_by)}});
  }
  ordered_json discarded = ordered_json::array();
  for (const auto& d : n.discarded) {
    discarded.push_back(
        {{"text", d.text}, {"reason", to_string(d.reason)}, {"specificity", d.specificity}});
  }
  ordered_json j = {{"post_id", n.narrative.post_id},
                    {"masked_text", n.narrative.masked_text},
                    {"token_count", n.narrative.token_count},
                    {"ground_truth_question", n.ground_truth.text},
                    {"specificity", n.ground_truth.specificity},
                    {"discarded_questions", discarded},
                    {"removed_questions", removed}};
  return j.dump();
}

ExtractedNarrative narrative_from_json(std::string_view line) {
  const auto j = parse_object(line);
  ExtractedNarrative n;
  n.narrative.post_id = j.at("post_id").get<std::string>();
  n.narrative.masked_text = j.at("masked_text").get<std::string>();
  n.narrative.token_count = j.at("token_count").get<std::size_t>();
  n.ground_truth.text = j.at("ground_truth_question").get<std::string>();
  n.ground_truth.specificity = j.at("specificity").get<double>();
  n.ground_truth.post_id = n.narrative.post_id;
  for (const auto& d : j.value("discarded_questions", json::array())) {
    n.discarded.push_back({d.at("text").get<std::string>(),
                           parse_reason(d.at("reason").get<std::string>()),
                           d.value("specificity", 0.0)});
  }
  for (const auto& q : j.value("removed_questions", json::array())) {
    QuestionCandidate c;
    c.text = q.at("text").get<std::string>();
    c.source = parse_source(q.at("source").get<std::string>());
    c.sentence_index = q.at("sentence_index").get<std::size_t>();
    c.detected_by = parse_detection(q.at("detected_by").get<std::string>());
    n.narrative.removed_questions.push_back(std::move(c));
  }
  return n;
}

std::string pair_to_json(const PairCandidate& pair) {
  ordered_json j = {{"id_a", pair.id_a}, {"id_b", pair.id_b}, {"similarity", pair.similarity}};
  return j.dump();
}

PairCandidate pair_from_json(std::string_view line) {
  const auto j = parse_object(line);
  PairCandidate p;
  p.id_a = j.at("id_a").get<std::string>();
  p.id_b = j.at("id_b").get<std::string>();
  p.similarity = j.at("similarity").get<double>();
  return p;
}

std::string instance_to_json(const ClozeInstance& inst) {
  ordered_json j = {
      {"instance_id", inst.instance_id},
      {"narrative", inst.narrative},
      {"question_a", inst.question_a},
      {"question_b", inst.question_b},
      {"label", to_string(inst.label)},
      {"source_post_id", inst.source_post_id},
      {"alternative_post_id", inst.alternative_post_id},
      {"diagnostics",
       {{"pair_similarity", inst.diagnostics.pair_similarity},
        {"min_question_narrative_similarity", inst.diagnostics.min_question_narrative_similarity},
        {"question_pair_similarity", inst.diagnostics.question_pair_similarity}}}};
  return j.dump();
}

ClozeInstance instance_from_json(std::string_view line) {
  const auto j = parse_object(line);
  ClozeInstance inst;
  inst.instance_id = j.at("instance_id").get<std::string>();
  inst.narrative = j.at("narrative").get<std::string>();
  inst.question_a = j.at("question_a").get<std::string>();
  inst.question_b = j.at("question_b").get<std::string>();
  const auto label = parse_slot(j.at("label").get<std::string>());
  if (!label) throw std::runtime_error("label must be a or b");
  inst.label = *label;
  inst.source_post_id = j.value("source_post_id", std::string{});
  inst.alternative_post_id = j.value("alternative_post_id", std::string{});
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    inst.diagnostics.pair_similarity = d.value("pair_similarity", 0.0);
    inst.diagnostics.min_question_narrative_similarity =
        d.value("min_question_narrative_similarity", 0.0);
    inst.diagnostics.question_pair_similarity = d.value("question_pair_similarity", 0.0);
  }
  return inst;
}

}  // namespace advq
