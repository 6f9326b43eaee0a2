#include "ipricing/extractor.hpp"

#include <thread>

#include "json.hpp"

#include "ipricing/text.hpp"

namespace ipricing::extract {

using nlohmann::json;

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Plans: return "plans";
    case Category::Features: return "features";
    case Category::UsageLimits: return "usageLimits";
    case Category::AddOns: return "addOns";
  }
  return "unknown";
}

namespace {

std::optional<std::string> scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  return std::nullopt;
}

std::optional<std::string> field(const json& item, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (item.contains(name)) {
      if (auto s = scalar_to_string(item[name])) return s;
    }
  }
  return std::nullopt;
}

std::map<std::string, std::string> object_field(const json& item,
                                                std::initializer_list<const char*> names) {
  std::map<std::string, std::string> out;
  for (const char* name : names) {
    if (item.contains(name) && item[name].is_object()) {
      for (const auto& [key, value] : item[name].items()) {
        if (auto s = scalar_to_string(value)) out[key] = *s;
      }
      break;
    }
  }
  return out;
}

std::vector<std::string> array_field(const json& item,
                                     std::initializer_list<const char*> names) {
  std::vector<std::string> out;
  for (const char* name : names) {
    if (item.contains(name) && item[name].is_array()) {
      for (const auto& value : item[name]) {
        if (auto s = scalar_to_string(value)) out.push_back(*s);
      }
      break;
    }
  }
  return out;
}

// Finds the first parseable top-level JSON array in free-form model output.
std::optional<json> recover_array(const std::string& raw) {
  for (std::size_t start = raw.find('['); start != std::string::npos;
       start = raw.find('[', start + 1)) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
      char c = raw[i];
      if (in_string) {
        if (c == '\\') ++i;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '[' || c == '{') ++depth;
      else if (c == ']' || c == '}') {
        --depth;
        if (depth == 0) {
          json parsed = json::parse(raw.substr(start, i - start + 1), nullptr,
                                    /*allow_exceptions=*/false);
          if (!parsed.is_discarded() && parsed.is_array()) return parsed;
          break;  // try the next '['
        }
      }
    }
  }
  return std::nullopt;
}

ExtractedItem coerce_item(const json& object, Category category) {
  ExtractedItem item;
  if (auto name = field(object, {"name", "title"})) item.name = *name;
  item.description = field(object, {"description"});
  item.unit = field(object, {"unit"});
  switch (category) {
    case Category::Plans:
      item.monthly_price = field(object, {"monthlyPrice", "monthly_price", "monthly", "price"});
      item.annual_price =
          field(object, {"annualPrice", "annual_price", "annual", "yearlyPrice", "yearly_price"});
      item.currency = field(object, {"currency"});
      break;
    case Category::Features:
      item.values = object_field(object, {"values", "perPlan", "per_plan", "plans"});
      break;
    case Category::UsageLimits:
      item.value = field(object, {"value", "defaultValue", "default"});
      item.values = object_field(object, {"values", "perPlan", "per_plan", "plans"});
      item.linked_features = array_field(object, {"linkedFeatures", "linked_features"});
      break;
    case Category::AddOns:
      item.price = field(object, {"price", "monthlyPrice", "monthly_price"});
      item.currency = field(object, {"currency"});
      if (object.contains("availableFor") || object.contains("available_for")) {
        const json& af =
            object.contains("availableFor") ? object["availableFor"] : object["available_for"];
        if (af.is_string()) {
          std::string value = af.get<std::string>();
          if (text::normalize_name(value) == "all" || text::normalize_name(value) == "all plans") {
            item.available_for_all = true;
          } else if (!value.empty()) {
            item.available_for.push_back(value);
          }
        } else if (af.is_array()) {
          for (const auto& v : af) {
            if (auto s = scalar_to_string(v)) item.available_for.push_back(*s);
          }
        }
      }
      if (object.contains("standalone") && object["standalone"].is_boolean()) {
        item.standalone = object["standalone"].get<bool>();
      }
      item.values = object_field(object, {"values", "features"});
      item.extensions =
          object_field(object, {"extensions", "usageLimitExtensions", "usage_limit_extensions"});
      break;
  }
  return item;
}

}  // namespace

ParsedItems parse_structured_response(const std::string& raw, Category category) {
  auto array = recover_array(raw);
  if (!array) {
    std::string preview = raw.substr(0, 160);
    throw PipelineError(ErrorCode::ParseFailed,
                        "no JSON array recoverable from response: \"" + preview + "\"");
  }
  ParsedItems out;
  std::size_t index = 0;
  for (const json& element : *array) {
    ++index;
    if (!element.is_object()) {
      out.warnings.push_back("element #" + std::to_string(index) + " is not an object; skipped");
      continue;
    }
    ExtractedItem item = coerce_item(element, category);
    if (text::normalize_name(item.name).empty()) {
      out.warnings.push_back("element #" + std::to_string(index) + " has no name; skipped");
      continue;
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

namespace {

Category category_of(TemplateId id) {
  switch (id) {
    case TemplateId::Plans: return Category::Plans;
    case TemplateId::Features: return Category::Features;
    case TemplateId::UsageLimits: return Category::UsageLimits;
    case TemplateId::AddonsInTable:
    case TemplateId::AddonsFromHtml: return Category::AddOns;
  }
  return Category::Plans;
}

std::string default_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

ProviderResponse complete_with_retries(Provider& provider, const ProviderRequest& request,
                                       const ExtractorOptions& options) {
  std::chrono::milliseconds delay = options.backoff;
  int attempts = std::max(1, options.retries);
  for (int attempt = 1;; ++attempt) {
    try {
      return provider.complete(request);
    } catch (const PipelineError& e) {
      if (!e.transient() || attempt >= attempts) throw;
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
}

}  // namespace

ExtractionRecord run_pass(const PromptTemplate& tmpl, const ingest::CleanedPayload& payload,
                          const PassContext& context, Provider& provider,
                          const ExtractorOptions& options) {
  ProviderRequest request;
  request.model = options.model;
  request.prompt = render_template(tmpl, payload.text, context.prior_plans);
  request.template_id = std::string(template_id_name(tmpl.id));
  request.payload_hash = text::to_hex(text::fnv1a64(payload.text));

  ProviderResponse response = complete_with_retries(provider, request, options);
  ParsedItems parsed = parse_structured_response(response.text, category_of(tmpl.id));

  ExtractionRecord record;
  record.category = category_of(tmpl.id);
  record.items = std::move(parsed.items);
  record.warnings = std::move(parsed.warnings);
  Provenance provenance;
  provenance.template_id = tmpl.id;
  provenance.template_version = tmpl.version;
  provenance.provider_id = provider.id();
  provenance.model = options.model;
  provenance.timestamp = options.timestamp ? options.timestamp() : default_timestamp();
  record.provenance.push_back(std::move(provenance));
  return record;
}

namespace {

// Table-pass items win field conflicts; html-pass items fill gaps or append.
ExtractionRecord merge_addons(ExtractionRecord table, ExtractionRecord html,
                              DiagnosticsLedger& notes) {
  ExtractionRecord merged = std::move(table);
  auto find_existing = [&](const std::string& name) -> ExtractedItem* {
    for (ExtractedItem& item : merged.items) {
      if (text::normalize_name(item.name) == text::normalize_name(name)) return &item;
    }
    return nullptr;
  };

  for (ExtractedItem& incoming : html.items) {
    ExtractedItem* existing = find_existing(incoming.name);
    if (existing == nullptr) {
      merged.items.push_back(std::move(incoming));
      continue;
    }
    auto reconcile = [&](std::optional<std::string>& kept,
                         const std::optional<std::string>& other, const char* field_name) {
      if (!other) return;
      if (!kept) {
        kept = other;
        return;
      }
      if (*kept != *other) {
        std::string message = std::string("table pass kept ") + field_name + " \"" + *kept +
                              "\"; html pass said \"" + *other + "\"";
        existing->notes.push_back("merge-conflict: " + message);
        notes.add(std::string(codes::kMergeConflict), Severity::Warning, message, "addOns",
                  text::normalize_name(existing->name));
      }
    };
    reconcile(existing->price, incoming.price, "price");
    reconcile(existing->unit, incoming.unit, "unit");
    reconcile(existing->description, incoming.description, "description");
    reconcile(existing->currency, incoming.currency, "currency");
    if (!existing->standalone && incoming.standalone) existing->standalone = incoming.standalone;
    if (!existing->available_for_all && existing->available_for.empty()) {
      existing->available_for_all = incoming.available_for_all;
      existing->available_for = incoming.available_for;
    }
    for (const auto& [key, value] : incoming.values) {
      existing->values.emplace(key, value);  // keeps the table value on conflict
    }
    for (const auto& [key, value] : incoming.extensions) {
      existing->extensions.emplace(key, value);
    }
  }
  for (Provenance& p : html.provenance) merged.provenance.push_back(std::move(p));
  for (std::string& w : html.warnings) merged.warnings.push_back(std::move(w));
  merged.category = Category::AddOns;
  return merged;
}

}  // namespace

ExtractOutcome extract_all(const ingest::CleanedPayload& payload, Provider& provider,
                           const std::map<TemplateId, PromptTemplate>& templates,
                           const ExtractorOptions& options) {
  ExtractOutcome outcome;
  const auto& tmpl = [&](TemplateId id) -> const PromptTemplate& {
    auto it = templates.find(id);
    if (it == templates.end()) {
      throw PipelineError(ErrorCode::FileNotFound,
                          "missing prompt template " + template_filename(id));
    }
    return it->second;
  };

  // The plans pass anchors everything downstream; its failure propagates.
  ExtractionRecord plans =
      run_pass(tmpl(TemplateId::Plans), payload, PassContext{}, provider, options);
  PassContext context;
  for (const ExtractedItem& item : plans.items) context.prior_plans.push_back(item.name);
  outcome.records.push_back(std::move(plans));

  auto guarded = [&](TemplateId id, const PassContext& ctx) -> std::optional<ExtractionRecord> {
    try {
      return run_pass(tmpl(id), payload, ctx, provider, options);
    } catch (const PipelineError& e) {
      outcome.notes.add(std::string(codes::kPassFailed), Severity::Warning,
                        std::string(template_id_name(id)) + " pass failed: " + e.what(),
                        std::string(category_name(category_of(id))));
      return std::nullopt;
    }
  };

  auto empty_record = [&](Category category) {
    ExtractionRecord record;
    record.category = category;
    return record;
  };

  auto features = guarded(TemplateId::Features, context);
  outcome.records.push_back(features ? std::move(*features) : empty_record(Category::Features));

  auto usage = guarded(TemplateId::UsageLimits, context);
  outcome.records.push_back(usage ? std::move(*usage) : empty_record(Category::UsageLimits));

  auto addons_table = guarded(TemplateId::AddonsInTable, context);
  auto addons_html = guarded(TemplateId::AddonsFromHtml, PassContext{});
  if (addons_table && addons_html) {
    outcome.records.push_back(
        merge_addons(std::move(*addons_table), std::move(*addons_html), outcome.notes));
  } else if (addons_table) {
    outcome.records.push_back(std::move(*addons_table));
  } else if (addons_html) {
    outcome.records.push_back(std::move(*addons_html));
  } else {
    outcome.records.push_back(empty_record(Category::AddOns));
  }
  return outcome;
}

}  // namespace ipricing::extract
