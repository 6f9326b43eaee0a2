#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ipricing/diagnostics.hpp"
#include "ipricing/extractor.hpp"
#include "ipricing/model.hpp"

// The validation/repair stage between raw extraction records and the typed
// pricing. Nothing is deleted silently: every merge, retype, or drop leaves
// a ledger entry.
namespace ipricing::engine {

struct EngineConfig {
  double grounding_threshold = 0.85;  // token-overlap similarity
  std::size_t suspect_plan_count = 8;
};

// Value classification lexicon (see docs/engine.md): checkmark/cross tokens
// map to booleans, quantities with units become usage-limit candidates.
enum class ValueClass { BoolTrue, BoolFalse, Quantity, Number, Unlimited, Text, Empty };
struct ClassifiedValue {
  ValueClass cls = ValueClass::Text;
  Decimal amount;
  std::string unit;
};
ClassifiedValue classify_value(const std::string& raw);

std::optional<Price> parse_price_string(const std::string& raw);
std::optional<std::string> currency_of_price_string(const std::string& raw);
std::optional<LimitValue> parse_limit_string(const std::string& raw,
                                             const std::optional<std::string>& fallback_unit);

struct DedupeResult {
  std::vector<extract::ExtractionRecord> records;
  DiagnosticsLedger ledger;
};

// Within each category, items with equal normalized names merge into the
// first occurrence; conflicting fields are noted.
DedupeResult dedupe(std::vector<extract::ExtractionRecord> records);

// Annual/monthly discrepancy checks on typed plans; sentinels are skipped.
DiagnosticsLedger check_billing_consistency(const std::vector<Plan>& plans);

// Normalized payload text prepared for substring/fuzzy lookup.
class GroundingIndex {
 public:
  explicit GroundingIndex(const std::string& payload_text);

  struct Hit {
    double similarity = 0.0;
    std::string nearest;  // snippet of normalized source near the best match
  };
  Hit lookup(const std::string& name) const;

 private:
  std::string normalized_;
  std::set<std::string> tokens_;
};

// Flags item names without textual support; informs, never deletes.
DiagnosticsLedger ground(const std::vector<extract::ExtractionRecord>& records,
                         const GroundingIndex& index, double threshold = 0.85);

// Cross-record checks: plan/add-on name collisions, values for unknown
// plans, suspicious plan counts.
DiagnosticsLedger cross_validate(const std::vector<extract::ExtractionRecord>& records,
                                 const EngineConfig& config = {});

struct AssembleMeta {
  std::string saas_name;
  std::string source_url;
  Date extraction_date;
  std::string currency_fallback = "USD";
};

struct AssembleResult {
  Pricing pricing;
  DiagnosticsLedger ledger;
};

// Types the records into a Pricing (lexicon-driven), runs validate_model,
// and fails with ASSEMBLY_FAILED when nothing subscribable survives.
// Pre: records deduped.
AssembleResult assemble(const std::vector<extract::ExtractionRecord>& records,
                        const AssembleMeta& meta, const EngineConfig& config = {});

struct PipelineResult {
  std::optional<Pricing> pricing;
  DiagnosticsLedger ledger;  // all stages, pipeline order
};

// dedupe -> ground -> cross_validate -> assemble; ledgers concatenate in
// that order. Assembly failure leaves pricing empty with an ERROR entry.
PipelineResult run_pipeline(std::vector<extract::ExtractionRecord> records,
                            const GroundingIndex* index, const AssembleMeta& meta,
                            const EngineConfig& config = {});

}  // namespace ipricing::engine
