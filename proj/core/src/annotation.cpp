#include "advq/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "advq/io.hpp"

namespace advq {

namespace {

std::size_t index_of(Plausibility p) { return static_cast<std::size_t>(p); }

bool is_compatible(Plausibility p) { return p == Plausibility::L || p == Plausibility::U; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

char to_char(Plausibility p) { return "LUIEG"[index_of(p)]; }

std::string_view description(Plausibility p) {
  switch (p) {
    case Plausibility::L: return "Compatible and Likely";
    case Plausibility::U: return "Compatible but Unlikely";
    case Plausibility::I: return "Incompatible (Implicit)";
    case Plausibility::E: return "Incompatible (Explicit)";
    case Plausibility::G: return "Very General";
  }
  return "";
}

std::optional<Plausibility> parse_plausibility(std::string_view text) {
  if (text.size() != 1) return std::nullopt;
  switch (text[0]) {
    case 'L': case 'l': return Plausibility::L;
    case 'U': case 'u': return Plausibility::U;
    case 'I': case 'i': return Plausibility::I;
    case 'E': case 'e': return Plausibility::E;
    case 'G': case 'g': return Plausibility::G;
    default: return std::nullopt;
  }
}

std::vector<AnnotationRecord> parse_annotations(std::string_view csv) {
  const auto rows = parse_csv(csv);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw std::runtime_error("annotation file: missing column '" + std::string(name) + "'");
  };
  const auto c_instance = column("instance_id");
  const auto c_annotator = column("annotator_id");
  const auto c_choice = column("choice");
  const auto c_actual = column("plausibility_actual");
  const auto c_alt = column("plausibility_alternative");
  const auto width = std::max({c_instance, c_annotator, c_choice, c_actual, c_alt}) + 1;

  std::vector<AnnotationRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    const auto where = "annotation file line " + std::to_string(r + 1) + ": ";
    if (row.size() < width) throw std::runtime_error(where + "too few columns");
    AnnotationRecord rec;
    rec.instance_id = trim(row[c_instance]);
    rec.annotator_id = trim(row[c_annotator]);
    if (rec.instance_id.empty()) throw std::runtime_error(where + "empty instance_id");
    const auto choice = parse_slot(trim(row[c_choice]));
    const auto actual = parse_plausibility(trim(row[c_actual]));
    const auto alt = parse_plausibility(trim(row[c_alt]));
    if (!choice) throw std::runtime_error(where + "choice must be a or b");
    if (!actual || !alt) throw std::runtime_error(where + "plausibility must be one of L/U/I/E/G");
    rec.choice = *choice;
    rec.plausibility_actual = *actual;
    rec.plausibility_alternative = *alt;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  return parse_annotations(read_file(path));
}

std::vector<AnnotationRecord> primary_annotations(const std::vector<AnnotationRecord>& annotations) {
  std::unordered_set<std::string> seen;
  std::vector<AnnotationRecord> out;
  for (const auto& a : annotations) {
    if (seen.insert(a.instance_id).second) out.push_back(a);
  }
  return out;
}

PairTypeBreakdown pair_type_breakdown(const std::unordered_map<std::string, bool>& correct,
                                      const std::vector<AnnotationRecord>& annotations) {
  PairTypeBreakdown out;
  std::map<std::pair<std::size_t, std::size_t>, BucketRow> exact;
  std::array<BucketRow, 4> agg{BucketRow{"C + E"}, BucketRow{"C + {C, I}"}, BucketRow{"C + C"},
                               BucketRow{"L + {U, I}"}};
  for (const auto& a : primary_annotations(annotations)) {
    auto it = correct.find(a.instance_id);
    if (it == correct.end()) {
      ++out.skipped_unknown;
      continue;
    }
    const std::size_t hit = it->second ? 1 : 0;
    ++out.n;
    out.correct += hit;
    auto& row = exact[{index_of(a.plausibility_actual), index_of(a.plausibility_alternative)}];
    if (row.name.empty()) {
      row.name = std::string(1, to_char(a.plausibility_actual)) + " + " +
                 to_char(a.plausibility_alternative);
    }
    ++row.n;
    row.correct += hit;

    const auto act = a.plausibility_actual, alt = a.plausibility_alternative;
    auto count = [&](BucketRow& b) {
      ++b.n;
      b.correct += hit;
    };
    if (is_compatible(act)) {
      if (alt == Plausibility::E) count(agg[0]);
      if (is_compatible(alt) || alt == Plausibility::I) count(agg[1]);
      if (is_compatible(alt)) count(agg[2]);
    }
    if (act == Plausibility::L && (alt == Plausibility::U || alt == Plausibility::I)) {
      count(agg[3]);
    }
  }
  for (auto& [key, row] : exact) out.exact.push_back(std::move(row));
  out.aggregate.assign(agg.begin(), agg.end());
  return out;
}

std::unordered_map<std::string, bool> human_correctness(
    const std::vector<AnnotationRecord>& annotations,
    const std::unordered_map<std::string, Slot>& labels) {
  std::unordered_map<std::string, bool> out;
  for (const auto& a : primary_annotations(annotations)) {
    auto it = labels.find(a.instance_id);
    if (it != labels.end()) out.emplace(a.instance_id, a.choice == it->second);
  }
  return out;
}

LabelDistribution label_distribution(const std::vector<AnnotationRecord>& annotations) {
  LabelDistribution d;
  for (const auto& a : primary_annotations(annotations)) {
    ++d.n;
    ++d.actual[index_of(a.plausibility_actual)];
    ++d.alternative[index_of(a.plausibility_alternative)];
  }
  return d;
}

std::optional<Agreement> choice_agreement(const std::vector<AnnotationRecord>& annotations) {
  std::unordered_map<std::string, std::vector<const AnnotationRecord*>> by_instance;
  std::vector<std::string> order;
  for (const auto& a : annotations) {
    auto& list = by_instance[a.instance_id];
    if (list.empty()) order.push_back(a.instance_id);
    list.push_back(&a);
  }
  std::vector<char> first, second;
  for (const auto& id : order) {
    const auto& list = by_instance[id];
    if (list.size() < 2) continue;
    first.push_back(list[0]->choice == Slot::a ? 'a' : 'b');
    second.push_back(list[1]->choice == Slot::a ? 'a' : 'b');
  }
  if (first.empty()) return std::nullopt;
  Agreement ag;
  ag.n = first.size();
  std::size_t same = 0;
  for (std::size_t i = 0; i < first.size(); ++i) same += first[i] == second[i] ? 1 : 0;
  ag.observed = static_cast<double>(same) / static_cast<double>(ag.n);
  ag.kappa = cohen_kappa(first, second);
  return ag;
}

long rounded_percent(std::size_t count, std::size_t total) {
  if (total == 0) return 0;
  return std::lround(100.0 * static_cast<double>(count) / static_cast<double>(total));
}

}  // namespace advq
