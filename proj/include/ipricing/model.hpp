#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ipricing/decimal.hpp"
#include "ipricing/diagnostics.hpp"

namespace ipricing {

inline constexpr std::string_view kSyntaxVersion = "ip/1";

enum class ValueType { Boolean, Text, Numeric };
std::string_view value_type_name(ValueType t);

// A feature value: bool, free text, or an exact number.
using FeatureValue = std::variant<bool, std::string, Decimal>;
ValueType value_kind(const FeatureValue& v);

struct Feature {
  std::string name;
  std::optional<std::string> description;
  ValueType value_type = ValueType::Boolean;
  FeatureValue default_value = false;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct FiniteLimit {
  Decimal amount;
  std::string unit;
  friend bool operator==(const FiniteLimit&, const FiniteLimit&) = default;
};
struct Unlimited {
  friend bool operator==(const Unlimited&, const Unlimited&) = default;
};
using LimitValue = std::variant<FiniteLimit, Unlimited>;

struct UsageLimit {
  std::string name;
  LimitValue value = FiniteLimit{};
  std::vector<std::string> linked_features;

  friend bool operator==(const UsageLimit&, const UsageLimit&) = default;
};

// Price domain: an exact amount, free, or contact-sales. `free` is a distinct
// state, not a zero amount.
struct Price {
  enum class Kind { Amount, Free, ContactSales };
  Kind kind = Kind::Amount;
  Decimal amount;

  static Price money(Decimal d) { return Price{Kind::Amount, d}; }
  static Price free() { return Price{Kind::Free, {}}; }
  static Price contact_sales() { return Price{Kind::ContactSales, {}}; }

  friend bool operator==(const Price&, const Price&) = default;
};

struct Plan {
  std::string name;
  Price monthly_price;
  std::optional<Price> annual_price;
  std::string currency;  // ISO 4217
  std::map<std::string, FeatureValue> feature_values;
  std::map<std::string, LimitValue> usage_limit_values;

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Which plans an add-on can attach to. `all` wins over the explicit list.
struct AddOnAvailability {
  bool all_plans = false;
  std::vector<std::string> plans;

  friend bool operator==(const AddOnAvailability&, const AddOnAvailability&) = default;
};

struct AddOn {
  std::string name;
  Price price;
  std::optional<std::string> unit;
  AddOnAvailability available_for;
  bool standalone = false;
  std::map<std::string, FeatureValue> feature_values;
  std::map<std::string, LimitValue> usage_limit_values;
  std::map<std::string, LimitValue> usage_limit_extensions;

  friend bool operator==(const AddOn&, const AddOn&) = default;
};

struct Pricing {
  std::string saas_name;
  std::string source_url;
  Date extraction_date;
  std::string currency = "USD";
  std::string syntax_version = std::string(kSyntaxVersion);
  std::vector<Feature> features;
  std::vector<UsageLimit> usage_limits;
  std::vector<Plan> plans;
  std::vector<AddOn> add_ons;

  friend bool operator==(const Pricing&, const Pricing&) = default;
};

struct SummaryCounts {
  std::size_t plans = 0;
  std::size_t features = 0;
  std::size_t usage_limits = 0;
  std::size_t add_ons = 0;

  friend bool operator==(const SummaryCounts&, const SummaryCounts&) = default;
};

// Analyzer input: which add-ons require/exclude which, and which may be
// bought without any plan. Names are matched case-insensitively.
struct SubscriptionConstraints {
  std::map<std::string, std::set<std::string>> depends_on;
  std::map<std::string, std::set<std::string>> excludes;
  std::set<std::string> standalone_allowed;

  // Standalone permissions taken from the add-ons' own flags.
  static SubscriptionConstraints from_pricing(const Pricing& p);
};

// Declares the model VALID iff no ERROR-severity entries. Violations are
// data, not exceptions.
DiagnosticsLedger validate_model(const Pricing& p);

// Resolves constraint names against the pricing; self-dependencies and
// unknown names are ERRORs. The excludes relation is symmetrized.
DiagnosticsLedger validate_constraints(const Pricing& p, const SubscriptionConstraints& c);

SummaryCounts summarize(const Pricing& p);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1ULL << 26;

// Exact count of valid subscriptions by exhaustive enumeration: (plan, subset
// of add-ons available for it) plus (no plan, nonempty subset of
// standalone-allowed add-ons), filtered by depends/excludes. Throws
// PipelineError{EnumerationCapExceeded} when the brute-force bound
// (plans + standalone bucket) * 2^|addOns| exceeds `cap`.
std::uint64_t configuration_space(const Pricing& p, const SubscriptionConstraints& c,
                                  std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace ipricing
