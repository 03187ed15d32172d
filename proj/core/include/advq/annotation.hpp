#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advq/pairing.hpp"

namespace advq {

// Compatible-Likely, Compatible-Unlikely, Implicitly incompatible,
// Explicitly incompatible, very General.
enum class Plausibility { L, U, I, E, G };
inline constexpr std::array<Plausibility, 5> kPlausibilities = {
    Plausibility::L, Plausibility::U, Plausibility::I, Plausibility::E, Plausibility::G};

char to_char(Plausibility p);
std::string_view description(Plausibility p);
std::optional<Plausibility> parse_plausibility(std::string_view text);

struct AnnotationRecord {
  std::string instance_id;
  std::string annotator_id;
  Slot choice = Slot::a;
  Plausibility plausibility_actual = Plausibility::L;
  Plausibility plausibility_alternative = Plausibility::L;
};

// CSV with header instance_id,annotator_id,choice,plausibility_actual,
// plausibility_alternative (column order free). Bad rows throw
// std::runtime_error with the line number.
std::vector<AnnotationRecord> load_annotations(const std::string& path);
std::vector<AnnotationRecord> parse_annotations(std::string_view csv);

// Cohen's kappa between two labelings of the same items.
// Throws std::invalid_argument on empty input or a length mismatch.
template <typename Label>
double cohen_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cohen_kappa: length mismatch");
  if (a.empty()) throw std::invalid_argument("cohen_kappa: empty labelings");
  const double n = static_cast<double>(a.size());
  std::map<Label, std::array<double, 2>> marginals;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    marginals[a[i]][0] += 1.0;
    marginals[b[i]][1] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, m] : marginals) p_e += (m[0] / n) * (m[1] / n);
  if (p_e == 1.0) {
    // Both raters used one and the same label throughout.
    return 1.0;
  }
  return (p_o - p_e) / (1.0 - p_e);
}

template <typename Label>
double cohen_kappa(const std::vector<Label>& a, const std::vector<Label>& b) {
  return cohen_kappa(std::span<const Label>(a), std::span<const Label>(b));
}

struct BucketRow {
  std::string name;
  std::size_t n = 0;
  std::size_t correct = 0;

  double accuracy() const { return n == 0 ? 0.0 : static_cast<double>(correct) / n; }
};

struct PairTypeBreakdown {
  std::size_t n = 0;
  std::size_t correct = 0;
  std::size_t skipped_unknown = 0;   // annotations for instances without a prediction
  std::vector<BucketRow> exact;      // "X + Y" for each observed combination; a partition
  std::vector<BucketRow> aggregate;  // C + E, C + {C, I}, C + C, L + {U, I}

  double accuracy() const { return n == 0 ? 0.0 : static_cast<double>(correct) / n; }
  double share(const BucketRow& row) const {
    return n == 0 ? 0.0 : static_cast<double>(row.n) / static_cast<double>(n);
  }
};

// Uses the first annotation of each instance. `correct` maps instance ids to
// whether the system (or annotator) under evaluation got them right.
PairTypeBreakdown pair_type_breakdown(const std::unordered_map<std::string, bool>& correct,
                                      const std::vector<AnnotationRecord>& annotations);

// First annotation per instance, in file order.
std::vector<AnnotationRecord> primary_annotations(const std::vector<AnnotationRecord>& annotations);

// Whether each annotated instance's primary human choice matches its label.
std::unordered_map<std::string, bool> human_correctness(
    const std::vector<AnnotationRecord>& annotations,
    const std::unordered_map<std::string, Slot>& labels);

struct LabelDistribution {
  std::size_t n = 0;
  std::array<std::size_t, 5> actual{};       // indexed like kPlausibilities
  std::array<std::size_t, 5> alternative{};
};

LabelDistribution label_distribution(const std::vector<AnnotationRecord>& annotations);

struct Agreement {
  std::size_t n = 0;  // doubly annotated instances
  double observed = 0.0;
  double kappa = 0.0;
};

// Agreement on the choice between the first two annotations of every
// instance that has at least two.
std::optional<Agreement> choice_agreement(const std::vector<AnnotationRecord>& annotations);

// Integer percentage, halves rounded away from zero (14.5 -> 15).
long rounded_percent(std::size_t count, std::size_t total);

}  // namespace advq
