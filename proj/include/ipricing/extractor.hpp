#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipricing/diagnostics.hpp"
#include "ipricing/ingest.hpp"
#include "ipricing/prompts.hpp"
#include "ipricing/provider.hpp"

namespace ipricing::extract {

enum class Category { Plans, Features, UsageLimits, AddOns };
std::string_view category_name(Category c);

// Raw per-category output of one pass, before any validation. Scalars stay
// strings; typing happens in the process engine.
struct ExtractedItem {
  std::string name;
  std::optional<std::string> description;
  std::optional<std::string> unit;
  std::optional<std::string> monthly_price;
  std::optional<std::string> annual_price;
  std::optional<std::string> price;
  std::optional<std::string> currency;
  std::optional<std::string> value;              // usage-limit base value
  std::map<std::string, std::string> values;     // plan name -> raw value
  std::vector<std::string> linked_features;
  std::vector<std::string> available_for;
  bool available_for_all = false;
  std::optional<bool> standalone;
  std::map<std::string, std::string> extensions;  // usage-limit name -> raw value
  std::vector<std::string> notes;

  friend bool operator==(const ExtractedItem&, const ExtractedItem&) = default;
};

struct Provenance {
  TemplateId template_id = TemplateId::Plans;
  std::string template_version;
  std::string provider_id;
  std::string model;
  std::string timestamp;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ExtractionRecord {
  Category category = Category::Plans;
  std::vector<ExtractedItem> items;
  std::vector<Provenance> provenance;  // both passes retained for merged add-ons
  std::vector<std::string> warnings;   // item-level salvage notes

  friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

struct ParsedItems {
  std::vector<ExtractedItem> items;
  std::vector<std::string> warnings;
};

// Recovers a JSON array from model output: markdown fences stripped, leading
// and trailing prose tolerated, per-item schema applied. Items missing a name
// are rejected individually; PARSE_FAILED only when no array is recoverable.
ParsedItems parse_structured_response(const std::string& raw, Category category);

struct ExtractorOptions {
  std::string model = "default-model";
  int retries = 3;
  std::chrono::milliseconds backoff{500};
  std::function<std::string()> timestamp;  // injectable for determinism
};

struct PassContext {
  std::vector<std::string> prior_plans;
};

// Renders the template, calls the provider (bounded retries on transient
// failures), and parses the response into a record.
ExtractionRecord run_pass(const PromptTemplate& tmpl, const ingest::CleanedPayload& payload,
                          const PassContext& context, Provider& provider,
                          const ExtractorOptions& options);

struct ExtractOutcome {
  std::vector<ExtractionRecord> records;  // plans, features, usage limits, merged add-ons
  DiagnosticsLedger notes;
};

// Runs the five passes in order; plan names feed the dependent passes; the
// two add-on passes merge by normalized name with table-pass priority. A
// failing later pass degrades to a partial result with a PASS_FAILED note;
// a failing plans pass propagates.
ExtractOutcome extract_all(const ingest::CleanedPayload& payload, Provider& provider,
                           const std::map<TemplateId, PromptTemplate>& templates,
                           const ExtractorOptions& options);

}  // namespace ipricing::extract
