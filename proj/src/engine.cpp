#include "ipricing/engine.hpp"

#include <algorithm>

#include "ipricing/text.hpp"

namespace ipricing::engine {

using extract::Category;
using extract::ExtractedItem;
using extract::ExtractionRecord;

namespace {

const std::set<std::string>& true_tokens() {
  static const std::set<std::string> s = {"✓", "✔", "✅", "☑", "yes", "y", "true", "included",
                                          "include", "si", "sí"};
  return s;
}

const std::set<std::string>& false_tokens() {
  static const std::set<std::string> s = {"✗", "✘", "✖", "×", "x", "no", "false", "-", "–", "—",
                                          "not included", "n/a", "na", "none"};
  return s;
}

const std::set<std::string>& unlimited_tokens() {
  static const std::set<std::string> s = {"unlimited", "∞", "no limit", "no limits", "infinite"};
  return s;
}

const std::set<std::string>& contact_tokens() {
  static const std::set<std::string> s = {"contact sales", "contact us", "contact_sales",
                                          "custom", "custom pricing", "talk to sales",
                                          "get a quote", "quote", "call us"};
  return s;
}

const std::set<std::string>& free_tokens() {
  static const std::set<std::string> s = {"free", "gratis", "0 free"};
  return s;
}

// Strips a leading currency marker; returns the ISO code when recognizable.
std::optional<std::string> take_currency_symbol(std::string& s) {
  struct Marker {
    std::string_view symbol;
    const char* code;
  };
  static const Marker markers[] = {
      {"US$", "USD"}, {"$", "USD"}, {"€", "EUR"}, {"£", "GBP"}, {"¥", "JPY"},
      {"USD", "USD"}, {"EUR", "EUR"}, {"GBP", "GBP"},
  };
  for (const Marker& m : markers) {
    if (s.rfind(m.symbol, 0) == 0) {
      s.erase(0, m.symbol.size());
      while (!s.empty() && s.front() == ' ') s.erase(0, 1);
      return std::string(m.code);
    }
  }
  return std::nullopt;
}

// First numeric token of a string like "25.99", "1,000" or "25.99 per month".
std::optional<Decimal> leading_number(std::string& rest) {
  std::string token;
  std::size_t i = 0;
  while (i < rest.size() &&
         (std::isdigit(static_cast<unsigned char>(rest[i])) || rest[i] == '.' || rest[i] == ',')) {
    if (rest[i] != ',') token.push_back(rest[i]);
    ++i;
  }
  auto value = Decimal::parse(token);
  if (!value) return std::nullopt;
  rest.erase(0, i);
  while (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
  return value;
}

}  // namespace

ClassifiedValue classify_value(const std::string& raw) {
  std::string norm = text::normalize_name(raw);
  if (norm.empty()) return {ValueClass::Empty, {}, {}};
  if (true_tokens().count(norm)) return {ValueClass::BoolTrue, {}, {}};
  if (false_tokens().count(norm)) return {ValueClass::BoolFalse, {}, {}};
  if (unlimited_tokens().count(norm)) return {ValueClass::Unlimited, {}, {}};

  std::string rest = text::collapse_whitespace(raw);
  auto number = leading_number(rest);
  if (number) {
    if (rest.empty()) return {ValueClass::Number, *number, {}};
    return {ValueClass::Quantity, *number, rest};
  }
  return {ValueClass::Text, {}, {}};
}

std::optional<Price> parse_price_string(const std::string& raw) {
  std::string norm = text::normalize_name(raw);
  if (norm.empty()) return std::nullopt;
  if (free_tokens().count(norm)) return Price::free();
  if (contact_tokens().count(norm)) return Price::contact_sales();

  std::string rest = text::collapse_whitespace(raw);
  take_currency_symbol(rest);
  auto number = leading_number(rest);
  if (!number || number->negative()) return std::nullopt;
  // Trailing qualifiers ("per user/month", "/mo") are unit text, not price.
  return Price::money(*number);
}

std::optional<std::string> currency_of_price_string(const std::string& raw) {
  std::string rest = text::collapse_whitespace(raw);
  return take_currency_symbol(rest);
}

std::optional<LimitValue> parse_limit_string(const std::string& raw,
                                             const std::optional<std::string>& fallback_unit) {
  ClassifiedValue v = classify_value(raw);
  switch (v.cls) {
    case ValueClass::Unlimited: return LimitValue{Unlimited{}};
    case ValueClass::Quantity: return LimitValue{FiniteLimit{v.amount, v.unit}};
    case ValueClass::Number: {
      std::string unit = fallback_unit.value_or("");
      if (text::collapse_whitespace(unit).empty()) unit = "count";
      return LimitValue{FiniteLimit{v.amount, unit}};
    }
    default: return std::nullopt;
  }
}

DedupeResult dedupe(std::vector<ExtractionRecord> records) {
  DedupeResult result;
  for (ExtractionRecord& record : records) {
    ExtractionRecord deduped = record;
    deduped.items.clear();
    std::map<std::string, std::size_t> first_index;
    for (ExtractedItem& item : record.items) {
      std::string key = text::normalize_name(item.name);
      auto it = first_index.find(key);
      if (it == first_index.end()) {
        first_index[key] = deduped.items.size();
        deduped.items.push_back(std::move(item));
        continue;
      }
      ExtractedItem& kept = deduped.items[it->second];
      result.ledger.add(std::string(codes::kDuplicateMerged), Severity::Warning,
                        "merged duplicate \"" + item.name + "\" into \"" + kept.name + "\"",
                        std::string(extract::category_name(record.category)), key);
      auto fill = [&](std::optional<std::string>& first, const std::optional<std::string>& dup,
                      const char* field_name) {
        if (!dup) return;
        if (!first) {
          first = dup;
          return;
        }
        if (*first != *dup) {
          result.ledger.add(std::string(codes::kValueConflict), Severity::Warning,
                            std::string(field_name) + " conflict: kept \"" + *first +
                                "\", dropped \"" + *dup + "\"",
                            std::string(extract::category_name(record.category)), key);
        }
      };
      fill(kept.description, item.description, "description");
      fill(kept.unit, item.unit, "unit");
      fill(kept.monthly_price, item.monthly_price, "monthlyPrice");
      fill(kept.annual_price, item.annual_price, "annualPrice");
      fill(kept.price, item.price, "price");
      fill(kept.currency, item.currency, "currency");
      fill(kept.value, item.value, "value");
      for (const auto& [plan, value] : item.values) {
        auto existing = kept.values.find(plan);
        if (existing == kept.values.end()) {
          kept.values.emplace(plan, value);
        } else if (existing->second != value) {
          result.ledger.add(std::string(codes::kValueConflict), Severity::Warning,
                            "value conflict for plan \"" + plan + "\": kept \"" +
                                existing->second + "\", dropped \"" + value + "\"",
                            std::string(extract::category_name(record.category)), key);
        }
      }
      for (const auto& [limit, value] : item.extensions) kept.extensions.emplace(limit, value);
      for (const std::string& linked : item.linked_features) {
        if (std::find(kept.linked_features.begin(), kept.linked_features.end(), linked) ==
            kept.linked_features.end()) {
          kept.linked_features.push_back(linked);
        }
      }
      if (!kept.standalone && item.standalone) kept.standalone = item.standalone;
      if (!kept.available_for_all && kept.available_for.empty()) {
        kept.available_for_all = item.available_for_all;
        kept.available_for = item.available_for;
      }
    }
    result.records.push_back(std::move(deduped));
  }
  return result;
}

DiagnosticsLedger check_billing_consistency(const std::vector<Plan>& plans) {
  DiagnosticsLedger ledger;
  for (const Plan& plan : plans) {
    if (plan.monthly_price.kind != Price::Kind::Amount || !plan.annual_price ||
        plan.annual_price->kind != Price::Kind::Amount) {
      continue;  // sentinel prices carry no ratio to check
    }
    Decimal annual = plan.annual_price->amount;
    Decimal yearly_at_monthly_rate = plan.monthly_price.amount * 12;
    if (annual > yearly_at_monthly_rate) {
      ledger.add(std::string(codes::kAnnualExceedsMonthly), Severity::Warning,
                 "annual price " + annual.to_money_string() + " exceeds 12x monthly " +
                     yearly_at_monthly_rate.to_money_string(),
                 "plans", text::normalize_name(plan.name));
    } else if (annual < plan.monthly_price.amount * 3) {  // below a 75% discount
      ledger.add(std::string(codes::kImplausibleDiscount), Severity::Warning,
                 "annual price " + annual.to_money_string() +
                     " is less than a quarter of 12x monthly " +
                     yearly_at_monthly_rate.to_money_string(),
                 "plans", text::normalize_name(plan.name));
    }
  }
  return ledger;
}

GroundingIndex::GroundingIndex(const std::string& payload_text)
    : normalized_(text::normalize_loose(payload_text)) {
  for (std::string& token : text::tokenize(normalized_)) tokens_.insert(std::move(token));
}

GroundingIndex::Hit GroundingIndex::lookup(const std::string& name) const {
  Hit hit;
  std::string needle = text::normalize_loose(name);
  if (needle.empty()) {
    hit.similarity = 1.0;
    return hit;
  }
  std::size_t at = normalized_.find(needle);
  if (at != std::string::npos) {
    hit.similarity = 1.0;
    return hit;
  }
  std::vector<std::string> needle_tokens = text::tokenize(needle);
  std::size_t present = 0;
  std::size_t first_hit = std::string::npos;
  for (const std::string& token : needle_tokens) {
    if (tokens_.count(token)) {
      ++present;
      if (first_hit == std::string::npos) first_hit = normalized_.find(token);
    }
  }
  hit.similarity = needle_tokens.empty()
                       ? 0.0
                       : static_cast<double>(present) / static_cast<double>(needle_tokens.size());
  if (first_hit != std::string::npos) {
    std::size_t begin = first_hit > 30 ? first_hit - 30 : 0;
    while (begin > 0 && (static_cast<unsigned char>(normalized_[begin]) & 0xC0) == 0x80) --begin;
    std::size_t end = std::min(normalized_.size(), first_hit + 40);
    while (end < normalized_.size() && (static_cast<unsigned char>(normalized_[end]) & 0xC0) == 0x80) ++end;
    hit.nearest = normalized_.substr(begin, end - begin);
  }
  return hit;
}

DiagnosticsLedger ground(const std::vector<ExtractionRecord>& records,
                         const GroundingIndex& index, double threshold) {
  DiagnosticsLedger ledger;
  for (const ExtractionRecord& record : records) {
    for (const ExtractedItem& item : record.items) {
      GroundingIndex::Hit hit = index.lookup(item.name);
      if (hit.similarity >= threshold) continue;
      char sim[16];
      std::snprintf(sim, sizeof(sim), "%.2f", hit.similarity);
      ledger.add(std::string(codes::kUngroundedItem), Severity::Warning,
                 "\"" + item.name + "\" has no textual support in the source (similarity " +
                     sim + ")",
                 std::string(extract::category_name(record.category)),
                 text::normalize_name(item.name),
                 hit.nearest.empty() ? std::optional<std::string>("no similar text found")
                                     : std::optional<std::string>("nearest: " + hit.nearest));
    }
  }
  return ledger;
}

namespace {

const ExtractionRecord* record_of(const std::vector<ExtractionRecord>& records,
                                  Category category) {
  for (const ExtractionRecord& r : records) {
    if (r.category == category) return &r;
  }
  return nullptr;
}

}  // namespace

DiagnosticsLedger cross_validate(const std::vector<ExtractionRecord>& records,
                                 const EngineConfig& config) {
  DiagnosticsLedger ledger;
  const ExtractionRecord* plans = record_of(records, Category::Plans);
  std::set<std::string> plan_names;
  if (plans != nullptr) {
    for (const ExtractedItem& item : plans->items) {
      plan_names.insert(text::normalize_name(item.name));
    }
  }

  if (const ExtractionRecord* addons = record_of(records, Category::AddOns)) {
    for (const ExtractedItem& item : addons->items) {
      std::string key = text::normalize_name(item.name);
      if (plan_names.count(key)) {
        ledger.add(std::string(codes::kPlanAddOnCollision), Severity::Warning,
                   "\"" + item.name + "\" was extracted both as a plan and as an add-on", "addOns",
                   key);
      }
    }
  }

  for (Category category : {Category::Features, Category::UsageLimits}) {
    const ExtractionRecord* record = record_of(records, category);
    if (record == nullptr) continue;
    for (const ExtractedItem& item : record->items) {
      for (const auto& [plan, value] : item.values) {
        if (!plan_names.count(text::normalize_name(plan))) {
          ledger.add(std::string(codes::kOrphanValue), Severity::Warning,
                     "\"" + item.name + "\" carries a value for unknown plan \"" + plan + "\"",
                     std::string(extract::category_name(category)),
                     text::normalize_name(item.name));
        }
      }
    }
  }

  if (plans != nullptr && plans->items.size() > config.suspect_plan_count) {
    ledger.add(std::string(codes::kSuspectPlanCount), Severity::Warning,
               std::to_string(plans->items.size()) +
                   " plans extracted; pages rarely offer more than " +
                   std::to_string(config.suspect_plan_count) +
                   " (over-extraction of add-ons or other products?)",
               "plans");
  }
  return ledger;
}

namespace {

struct PlanIndex {
  std::vector<std::string> declared;            // declaration order
  std::map<std::string, std::string> resolve;   // normalized -> declared spelling
};

// Feature typing: every non-empty value boolean -> Boolean; every value a
// quantity -> usage-limit candidate; bare numbers -> Numeric; else Text.
enum class FeatureShape { Boolean, Quantity, Numeric, Text, Empty };

FeatureShape shape_of(const ExtractedItem& item) {
  bool any = false, all_bool = true, all_quantity = true, all_number = true;
  for (const auto& [plan, raw] : item.values) {
    ClassifiedValue v = classify_value(raw);
    if (v.cls == ValueClass::Empty) continue;
    any = true;
    if (v.cls != ValueClass::BoolTrue && v.cls != ValueClass::BoolFalse) all_bool = false;
    if (v.cls != ValueClass::Quantity && v.cls != ValueClass::Unlimited &&
        v.cls != ValueClass::BoolFalse) {
      all_quantity = false;
    }
    if (v.cls != ValueClass::Number) all_number = false;
  }
  if (!any) return FeatureShape::Empty;
  if (all_bool) return FeatureShape::Boolean;
  if (all_quantity) return FeatureShape::Quantity;
  if (all_number) return FeatureShape::Numeric;
  return FeatureShape::Text;
}

}  // namespace

namespace {

struct AssembleOutcome {
  std::optional<Pricing> pricing;
  DiagnosticsLedger ledger;
};

AssembleOutcome assemble_impl(const std::vector<ExtractionRecord>& records,
                              const AssembleMeta& meta, const EngineConfig& config) {
  AssembleOutcome result;
  DiagnosticsLedger& ledger = result.ledger;
  result.pricing.emplace();
  Pricing& pricing = *result.pricing;
  pricing.saas_name = meta.saas_name;
  pricing.source_url = meta.source_url;
  pricing.extraction_date = meta.extraction_date;

  const ExtractionRecord* plans_record = record_of(records, Category::Plans);
  const ExtractionRecord* features_record = record_of(records, Category::Features);
  const ExtractionRecord* limits_record = record_of(records, Category::UsageLimits);
  const ExtractionRecord* addons_record = record_of(records, Category::AddOns);

  // Plans first: everything else resolves against them.
  PlanIndex plan_index;
  std::map<std::string, std::size_t> plan_position;
  if (plans_record != nullptr) {
    for (const ExtractedItem& item : plans_record->items) {
      std::string key = text::normalize_name(item.name);
      Plan plan;
      plan.name = item.name;

      std::optional<std::string> detected_currency;
      if (item.monthly_price) {
        if (auto price = parse_price_string(*item.monthly_price)) {
          plan.monthly_price = *price;
          detected_currency = currency_of_price_string(*item.monthly_price);
        } else {
          plan.monthly_price = Price::contact_sales();
          ledger.add(std::string(codes::kUnparseablePrice), Severity::Warning,
                     "monthly price \"" + *item.monthly_price +
                         "\" not parseable; recorded as contact_sales",
                     "plans", key);
        }
      } else {
        plan.monthly_price = Price::contact_sales();
        ledger.add(std::string(codes::kUnparseablePrice), Severity::Warning,
                   "no monthly price extracted; recorded as contact_sales", "plans", key);
      }
      if (item.annual_price) {
        if (auto price = parse_price_string(*item.annual_price)) {
          plan.annual_price = *price;
          if (!detected_currency) detected_currency = currency_of_price_string(*item.annual_price);
        } else {
          ledger.add(std::string(codes::kUnparseablePrice), Severity::Warning,
                     "annual price \"" + *item.annual_price + "\" not parseable; dropped",
                     "plans", key);
        }
      }
      if (item.currency && item.currency->size() == 3) {
        plan.currency = *item.currency;
        std::transform(plan.currency.begin(), plan.currency.end(), plan.currency.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
      } else if (detected_currency) {
        plan.currency = *detected_currency;
      } else {
        plan.currency = meta.currency_fallback;
      }

      plan_position[key] = pricing.plans.size();
      plan_index.declared.push_back(item.name);
      plan_index.resolve[key] = item.name;
      pricing.plans.push_back(std::move(plan));
    }
  }

  // Document currency: majority of plan currencies, fallback otherwise.
  if (!pricing.plans.empty()) {
    std::map<std::string, int> votes;
    for (const Plan& plan : pricing.plans) ++votes[plan.currency];
    auto best = std::max_element(votes.begin(), votes.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    pricing.currency = best->first;
  } else {
    pricing.currency = meta.currency_fallback;
  }

  auto resolve_plan = [&](const std::string& raw_name) -> std::optional<std::string> {
    auto it = plan_index.resolve.find(text::normalize_name(raw_name));
    if (it == plan_index.resolve.end()) return std::nullopt;
    return it->second;
  };

  std::map<std::string, std::string> limit_resolve;  // normalized -> declared
  auto add_usage_limit = [&](UsageLimit limit) {
    limit_resolve[text::normalize_name(limit.name)] = limit.name;
    pricing.usage_limits.push_back(std::move(limit));
  };

  // Features, with quantity-shaped ones re-modeled as usage limits.
  if (features_record != nullptr) {
    for (const ExtractedItem& item : features_record->items) {
      std::string key = text::normalize_name(item.name);
      FeatureShape shape = shape_of(item);

      if (shape == FeatureShape::Quantity) {
        ledger.add(std::string(codes::kUsageLimitCandidate), Severity::Warning,
                   "feature \"" + item.name + "\" holds quantity values; modeled as a usage limit",
                   "features", key);
        UsageLimit limit;
        limit.name = item.name;
        std::optional<LimitValue> base;
        for (const std::string& declared : plan_index.declared) {
          auto value_it = item.values.find(declared);
          // Values may be keyed by any spelling of the plan name.
          if (value_it == item.values.end()) {
            for (const auto& [plan, raw] : item.values) {
              if (text::normalize_name(plan) == text::normalize_name(declared)) {
                value_it = item.values.find(plan);
                break;
              }
            }
          }
          if (value_it == item.values.end()) continue;
          auto parsed = parse_limit_string(value_it->second, item.unit);
          if (!parsed) continue;
          if (!base) base = parsed;
          pricing.plans[plan_position[text::normalize_name(declared)]]
              .usage_limit_values[item.name] = *parsed;
        }
        limit.value = base.value_or(LimitValue{Unlimited{}});
        add_usage_limit(std::move(limit));
        continue;
      }

      Feature feature;
      feature.name = item.name;
      feature.description = item.description;
      switch (shape) {
        case FeatureShape::Boolean:
        case FeatureShape::Empty:
          feature.value_type = ValueType::Boolean;
          feature.default_value = false;
          break;
        case FeatureShape::Numeric:
          feature.value_type = ValueType::Numeric;
          feature.default_value = Decimal();
          break;
        default:
          feature.value_type = ValueType::Text;
          feature.default_value = std::string();
          break;
      }

      for (const auto& [plan, raw] : item.values) {
        auto declared = resolve_plan(plan);
        if (!declared) {
          ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                     "dropped value of \"" + item.name + "\" for unknown plan \"" + plan + "\"",
                     "features", key);
          continue;
        }
        ClassifiedValue v = classify_value(raw);
        if (v.cls == ValueClass::Empty) continue;
        Plan& plan_ref = pricing.plans[plan_position[text::normalize_name(*declared)]];
        switch (feature.value_type) {
          case ValueType::Boolean:
            plan_ref.feature_values[item.name] = (v.cls == ValueClass::BoolTrue);
            break;
          case ValueType::Numeric:
            plan_ref.feature_values[item.name] = v.amount;
            break;
          case ValueType::Text:
            if (v.cls == ValueClass::BoolFalse) {
              plan_ref.feature_values[item.name] = std::string();
            } else {
              plan_ref.feature_values[item.name] = text::collapse_whitespace(raw);
            }
            break;
        }
      }
      pricing.features.push_back(std::move(feature));
    }
  }

  std::set<std::string> feature_names;
  for (const Feature& f : pricing.features) feature_names.insert(text::normalize_name(f.name));

  // Usage limits from their own record.
  if (limits_record != nullptr) {
    for (const ExtractedItem& item : limits_record->items) {
      std::string key = text::normalize_name(item.name);
      if (limit_resolve.count(key)) {
        ledger.add(std::string(codes::kDuplicateMerged), Severity::Warning,
                   "usage limit \"" + item.name + "\" already modeled from the features table",
                   "usageLimits", key);
        continue;
      }
      UsageLimit limit;
      limit.name = item.name;
      for (const std::string& linked : item.linked_features) {
        if (feature_names.count(text::normalize_name(linked))) {
          // Keep the declared feature spelling.
          for (const Feature& f : pricing.features) {
            if (text::normalize_name(f.name) == text::normalize_name(linked)) {
              limit.linked_features.push_back(f.name);
              break;
            }
          }
        } else {
          ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                     "usage limit \"" + item.name + "\" linked to unknown feature \"" + linked +
                         "\"; link dropped",
                     "usageLimits", key);
        }
      }

      std::optional<LimitValue> base;
      if (item.value) base = parse_limit_string(*item.value, item.unit);
      for (const std::string& declared : plan_index.declared) {
        std::optional<std::string> raw;
        for (const auto& [plan, value] : item.values) {
          if (text::normalize_name(plan) == text::normalize_name(declared)) {
            raw = value;
            break;
          }
        }
        if (!raw) continue;
        auto parsed = parse_limit_string(*raw, item.unit);
        if (!parsed) {
          ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                     "unparseable limit value \"" + *raw + "\" of \"" + item.name +
                         "\" for plan \"" + declared + "\"; dropped",
                     "usageLimits", key);
          continue;
        }
        if (!base) base = parsed;
        pricing.plans[plan_position[text::normalize_name(declared)]]
            .usage_limit_values[item.name] = *parsed;
      }
      for (const auto& [plan, value] : item.values) {
        if (!resolve_plan(plan)) {
          ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                     "dropped value of \"" + item.name + "\" for unknown plan \"" + plan + "\"",
                     "usageLimits", key);
        }
      }
      if (!base) {
        ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                   "usage limit \"" + item.name + "\" has no parseable value; dropped",
                   "usageLimits", key);
        continue;
      }
      limit.value = *base;
      add_usage_limit(std::move(limit));
    }
  }

  // Add-ons last; collisions with plan names are dropped (the model forbids
  // them, and the collision warning already came from cross_validate).
  if (addons_record != nullptr) {
    for (const ExtractedItem& item : addons_record->items) {
      std::string key = text::normalize_name(item.name);
      if (plan_index.resolve.count(key)) {
        ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                   "add-on \"" + item.name + "\" collides with a plan name; dropped", "addOns",
                   key);
        continue;
      }
      AddOn add_on;
      add_on.name = item.name;
      if (item.price) {
        if (auto price = parse_price_string(*item.price)) {
          add_on.price = *price;
          if (add_on.price.kind == Price::Kind::Free) {
            // Add-on pricing has no free sentinel; zero cost is explicit.
            add_on.price = Price::money(Decimal());
          }
        } else {
          add_on.price = Price::contact_sales();
          ledger.add(std::string(codes::kUnparseablePrice), Severity::Warning,
                     "add-on price \"" + *item.price + "\" not parseable; recorded as contact_sales",
                     "addOns", key);
        }
      } else {
        add_on.price = Price::contact_sales();
        ledger.add(std::string(codes::kUnparseablePrice), Severity::Warning,
                   "no price extracted; recorded as contact_sales", "addOns", key);
      }
      add_on.unit = item.unit;
      add_on.standalone = item.standalone.value_or(false);
      if (item.available_for_all) {
        add_on.available_for.all_plans = true;
      } else {
        for (const std::string& plan : item.available_for) {
          if (auto declared = resolve_plan(plan)) {
            add_on.available_for.plans.push_back(*declared);
          } else {
            ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                       "add-on \"" + item.name + "\" offered for unknown plan \"" + plan +
                           "\"; reference dropped",
                       "addOns", key);
          }
        }
      }
      for (const auto& [limit, raw] : item.extensions) {
        auto resolved = limit_resolve.find(text::normalize_name(limit));
        if (resolved == limit_resolve.end()) {
          ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                     "add-on \"" + item.name + "\" extends unknown usage limit \"" + limit +
                         "\"; dropped",
                     "addOns", key);
          continue;
        }
        auto parsed = parse_limit_string(raw, std::nullopt);
        if (!parsed) {
          ledger.add(std::string(codes::kDroppedItem), Severity::Warning,
                     "unparseable extension \"" + raw + "\" on add-on \"" + item.name +
                         "\"; dropped",
                     "addOns", key);
          continue;
        }
        add_on.usage_limit_extensions[resolved->second] = *parsed;
      }
      pricing.add_ons.push_back(std::move(add_on));
    }
  }

  ledger.extend(check_billing_consistency(pricing.plans));

  bool any_standalone = std::any_of(pricing.add_ons.begin(), pricing.add_ons.end(),
                                    [](const AddOn& a) { return a.standalone; });
  if (pricing.plans.empty() && !any_standalone) {
    ledger.add(std::string(codes::kAssemblyFailed), Severity::Error,
               "no plans and no standalone add-ons survived assembly", "pricing");
    result.pricing.reset();
    return result;
  }

  DiagnosticsLedger validation = validate_model(pricing);
  ledger.extend(validation);
  if (validation.has_errors()) {
    ledger.add(std::string(codes::kAssemblyFailed), Severity::Error,
               "assembled pricing failed model validation", "pricing");
    result.pricing.reset();
    return result;
  }
  (void)config;
  return result;
}

}  // namespace

AssembleResult assemble(const std::vector<ExtractionRecord>& records, const AssembleMeta& meta,
                        const EngineConfig& config) {
  AssembleOutcome outcome = assemble_impl(records, meta, config);
  if (!outcome.pricing) {
    throw PipelineError(ErrorCode::AssemblyFailed,
                        "no valid pricing could be assembled from the records");
  }
  return AssembleResult{std::move(*outcome.pricing), std::move(outcome.ledger)};
}

PipelineResult run_pipeline(std::vector<ExtractionRecord> records, const GroundingIndex* index,
                            const AssembleMeta& meta, const EngineConfig& config) {
  PipelineResult result;
  DedupeResult deduped = dedupe(std::move(records));
  result.ledger.extend(deduped.ledger);
  if (index != nullptr) {
    result.ledger.extend(ground(deduped.records, *index, config.grounding_threshold));
  }
  result.ledger.extend(cross_validate(deduped.records, config));
  AssembleOutcome assembled = assemble_impl(deduped.records, meta, config);
  result.ledger.extend(assembled.ledger);
  result.pricing = std::move(assembled.pricing);
  return result;
}

}  // namespace ipricing::engine
