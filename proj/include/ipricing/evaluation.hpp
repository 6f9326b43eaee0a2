#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipricing/extractor.hpp"
#include "ipricing/model.hpp"

// Point-based extraction scoring: full points for correct/incorrect
// extractions, half points for partial ones, and the derived
// accuracy/precision/recall percentages.
namespace ipricing::eval {

enum class Verdict { Correct, Partial, Hallucinated, Missed, AbsentDynamic };
std::string_view verdict_name(Verdict v);
std::optional<Verdict> verdict_from(std::string_view name);

struct Judgment {
  extract::Category category = extract::Category::Plans;
  Verdict verdict = Verdict::Correct;
  std::string item_name;
  std::string note;  // required for PARTIAL: what was misrepresented

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

// Non-negative count with 0.5 granularity, kept exact as half-points.
struct HalfPoints {
  std::int64_t halves = 0;

  static HalfPoints whole(std::int64_t n) { return {n * 2}; }
  static HalfPoints half() { return {1}; }
  static std::optional<HalfPoints> parse(std::string_view text);
  std::string to_string() const;  // "4" or "4.5"

  friend HalfPoints operator+(HalfPoints a, HalfPoints b) { return {a.halves + b.halves}; }
  friend bool operator==(HalfPoints, HalfPoints) = default;
};

struct CategoryCounts {
  HalfPoints tp, fp, fn, tn;

  HalfPoints total() const { return tp + fp + fn + tn; }
  friend CategoryCounts operator+(const CategoryCounts& a, const CategoryCounts& b) {
    return {a.tp + b.tp, a.fp + b.fp, a.fn + b.fn, a.tn + b.tn};
  }
  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;
};

// CORRECT -> tp+1; PARTIAL -> tp+0.5, fp+0.5; HALLUCINATED -> fp+1;
// MISSED -> fn+1; ABSENT_DYNAMIC -> tn+1.
CategoryCounts score(const std::vector<Judgment>& judgments);

// Percentage with one-decimal display rounding (half-up), exact underneath.
struct MetricValue {
  bool defined = true;
  std::int64_t tenths = 0;  // 72.7% -> 727

  std::string render() const;  // "72.7", "100", or "-"
  friend bool operator==(MetricValue, MetricValue) = default;
};

struct MetricsRow {
  MetricValue accuracy, precision, recall;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// accuracy = (tp+tn)/total, precision = tp/(tp+fp), recall = tp/(tp+fn).
// A zero total is vacuous success (all 100); otherwise a zero denominator
// is UNDEFINED, rendered "-".
MetricsRow metrics(const CategoryCounts& counts);

struct Aggregate {
  MetricValue mean, median;
};

// Mean/median per metric over the displayed one-decimal row values;
// UNDEFINED cells are excluded from that metric's aggregation.
std::array<Aggregate, 3> aggregate(const std::vector<MetricsRow>& rows);

// Gold annotations: expected items per category (see docs/evaluation.md).
struct GoldItem {
  std::string name;
  std::optional<std::string> value;   // expected value signature
  std::vector<std::string> plans;     // features: expected availability
  bool dynamic = false;               // visible only behind interaction
};

struct GoldAnnotation {
  std::string saas;
  std::map<extract::Category, std::vector<GoldItem>> items;
};

GoldAnnotation parse_gold(std::string_view text);  // throws PipelineError{SyntaxError}

// Assisted diff producing a draft judgment sheet a human can edit:
// name-matched -> CORRECT or PARTIAL (value/availability mismatch);
// prediction-only -> HALLUCINATED; gold-only -> MISSED or ABSENT_DYNAMIC.
std::vector<Judgment> judge(const Pricing& pred, const GoldAnnotation& gold);

// The editable sheet: `<category> <verdict> "<name>" [note]` per line.
std::string write_judgments(const std::vector<Judgment>& judgments);
std::vector<Judgment> parse_judgments(std::string_view text);

// Raw-count rows: `saas<TAB>category<TAB>tp<TAB>fp<TAB>fn<TAB>tn`.
struct CountsRow {
  std::string saas;
  extract::Category category = extract::Category::Plans;
  CategoryCounts counts;
};
std::vector<CountsRow> parse_counts_file(std::string_view text);

}  // namespace ipricing::eval
