#include "ipricing/model.hpp"

#include <algorithm>
#include <cctype>

#include "ipricing/text.hpp"

namespace ipricing {

std::string_view value_type_name(ValueType t) {
  switch (t) {
    case ValueType::Boolean: return "boolean";
    case ValueType::Text: return "text";
    case ValueType::Numeric: return "numeric";
  }
  return "unknown";
}

ValueType value_kind(const FeatureValue& v) {
  if (std::holds_alternative<bool>(v)) return ValueType::Boolean;
  if (std::holds_alternative<std::string>(v)) return ValueType::Text;
  return ValueType::Numeric;
}

namespace {

bool currency_shaped(const std::string& code) {
  return code.size() == 3 && std::all_of(code.begin(), code.end(), [](unsigned char c) {
           return std::isupper(c) != 0;
         });
}

using NameSet = std::set<std::string>;

template <typename Seq, typename NameOf>
NameSet collect_names(const Seq& seq, NameOf name_of, DiagnosticsLedger& ledger,
                      std::string_view category, std::string_view duplicate_code) {
  NameSet seen;
  for (const auto& element : seq) {
    const std::string& name = name_of(element);
    std::string key = text::normalize_name(name);
    if (key.empty()) {
      ledger.add(std::string(codes::kEmptyName), Severity::Error,
                 "item has an empty name", std::string(category));
      continue;
    }
    if (!seen.insert(key).second) {
      ledger.add(std::string(duplicate_code), Severity::Error,
                 "more than one entry shares the name \"" + key + "\"", std::string(category),
                 key);
    }
  }
  return seen;
}

void check_references(const std::map<std::string, FeatureValue>& values, const NameSet& features,
                      DiagnosticsLedger& ledger, const std::string& category,
                      const std::string& owner) {
  for (const auto& [key, value] : values) {
    if (!features.count(text::normalize_name(key))) {
      ledger.add(std::string(codes::kDanglingReference), Severity::Error,
                 "\"" + owner + "\" assigns a value to unknown feature \"" + key + "\"", category,
                 owner);
    }
  }
}

void check_limit_references(const std::map<std::string, LimitValue>& values,
                            const NameSet& limits, DiagnosticsLedger& ledger,
                            const std::string& category, const std::string& owner) {
  for (const auto& [key, value] : values) {
    if (!limits.count(text::normalize_name(key))) {
      ledger.add(std::string(codes::kDanglingReference), Severity::Error,
                 "\"" + owner + "\" assigns a value to unknown usage limit \"" + key + "\"",
                 category, owner);
    }
  }
}

void check_price(const Price& price, DiagnosticsLedger& ledger, const std::string& category,
                 const std::string& owner) {
  if (price.kind == Price::Kind::Amount && price.amount.negative()) {
    ledger.add(std::string(codes::kNegativePrice), Severity::Error,
               "\"" + owner + "\" has a negative price " + price.amount.to_string(), category,
               owner);
  }
}

void check_limit_value(const LimitValue& value, DiagnosticsLedger& ledger,
                       const std::string& category, const std::string& owner) {
  if (const auto* finite = std::get_if<FiniteLimit>(&value)) {
    if (finite->amount.negative()) {
      ledger.add(std::string(codes::kNegativeLimit), Severity::Error,
                 "\"" + owner + "\" has a negative limit value " + finite->amount.to_string(),
                 category, owner);
    }
    if (text::collapse_whitespace(finite->unit).empty()) {
      ledger.add(std::string(codes::kMissingUnit), Severity::Error,
                 "\"" + owner + "\" has a finite limit without a unit", category, owner);
    }
  }
}

}  // namespace

DiagnosticsLedger validate_model(const Pricing& p) {
  DiagnosticsLedger ledger;

  if (!currency_shaped(p.currency)) {
    ledger.add(std::string(codes::kInvalidCurrency), Severity::Error,
               "document currency \"" + p.currency + "\" is not an ISO 4217 code", "pricing");
  }

  NameSet features = collect_names(
      p.features, [](const Feature& f) -> const std::string& { return f.name; }, ledger,
      "features", codes::kDuplicateFeature);
  NameSet limits = collect_names(
      p.usage_limits, [](const UsageLimit& u) -> const std::string& { return u.name; }, ledger,
      "usageLimits", codes::kDuplicateUsageLimit);
  NameSet plans = collect_names(
      p.plans, [](const Plan& pl) -> const std::string& { return pl.name; }, ledger, "plans",
      codes::kDuplicatePlan);
  NameSet add_ons = collect_names(
      p.add_ons, [](const AddOn& a) -> const std::string& { return a.name; }, ledger, "addOns",
      codes::kDuplicateAddOn);

  for (const Feature& f : p.features) {
    if (value_kind(f.default_value) != f.value_type) {
      ledger.add(std::string(codes::kValueTypeMismatch), Severity::Error,
                 "default value of \"" + f.name + "\" is " +
                     std::string(value_type_name(value_kind(f.default_value))) +
                     " but the feature is declared " + std::string(value_type_name(f.value_type)),
                 "features", text::normalize_name(f.name));
    }
  }

  for (const UsageLimit& u : p.usage_limits) {
    check_limit_value(u.value, ledger, "usageLimits", u.name);
    for (const std::string& linked : u.linked_features) {
      if (!features.count(text::normalize_name(linked))) {
        ledger.add(std::string(codes::kDanglingReference), Severity::Error,
                   "usage limit \"" + u.name + "\" links to unknown feature \"" + linked + "\"",
                   "usageLimits", text::normalize_name(u.name));
      }
    }
  }

  for (const Plan& plan : p.plans) {
    if (!currency_shaped(plan.currency)) {
      ledger.add(std::string(codes::kInvalidCurrency), Severity::Error,
                 "plan \"" + plan.name + "\" has non ISO 4217 currency \"" + plan.currency + "\"",
                 "plans", text::normalize_name(plan.name));
    }
    check_price(plan.monthly_price, ledger, "plans", plan.name);
    if (plan.annual_price) check_price(*plan.annual_price, ledger, "plans", plan.name);
    check_references(plan.feature_values, features, ledger, "plans", plan.name);
    check_limit_references(plan.usage_limit_values, limits, ledger, "plans", plan.name);
    for (const auto& [key, value] : plan.usage_limit_values) {
      check_limit_value(value, ledger, "plans", plan.name);
    }
  }

  for (const AddOn& add_on : p.add_ons) {
    std::string key = text::normalize_name(add_on.name);
    if (plans.count(key)) {
      ledger.add(std::string(codes::kPlanAddOnCollision), Severity::Error,
                 "\"" + key + "\" names both a plan and an add-on", "addOns", key);
    }
    check_price(add_on.price, ledger, "addOns", add_on.name);
    if (!add_on.available_for.all_plans) {
      for (const std::string& plan_name : add_on.available_for.plans) {
        if (!plans.count(text::normalize_name(plan_name))) {
          ledger.add(std::string(codes::kDanglingReference), Severity::Error,
                     "add-on \"" + add_on.name + "\" is offered for unknown plan \"" + plan_name +
                         "\"",
                     "addOns", key);
        }
      }
    }
    check_references(add_on.feature_values, features, ledger, "addOns", add_on.name);
    check_limit_references(add_on.usage_limit_values, limits, ledger, "addOns", add_on.name);
    check_limit_references(add_on.usage_limit_extensions, limits, ledger, "addOns", add_on.name);
    for (const auto& [k, v] : add_on.usage_limit_values) check_limit_value(v, ledger, "addOns", add_on.name);
    for (const auto& [k, v] : add_on.usage_limit_extensions) check_limit_value(v, ledger, "addOns", add_on.name);
  }

  bool any_standalone = std::any_of(p.add_ons.begin(), p.add_ons.end(),
                                    [](const AddOn& a) { return a.standalone; });
  if (p.plans.empty() && !any_standalone) {
    ledger.add(std::string(codes::kNoSubscriptionPath), Severity::Error,
               "pricing has no plans and no standalone add-ons; nothing can be subscribed",
               "pricing");
  }

  return ledger;
}

SubscriptionConstraints SubscriptionConstraints::from_pricing(const Pricing& p) {
  SubscriptionConstraints c;
  for (const AddOn& a : p.add_ons) {
    if (a.standalone) c.standalone_allowed.insert(text::normalize_name(a.name));
  }
  return c;
}

DiagnosticsLedger validate_constraints(const Pricing& p, const SubscriptionConstraints& c) {
  DiagnosticsLedger ledger;
  NameSet add_ons;
  for (const AddOn& a : p.add_ons) add_ons.insert(text::normalize_name(a.name));

  auto check_name = [&](const std::string& name, const std::string& context) {
    if (!add_ons.count(text::normalize_name(name))) {
      ledger.add(std::string(codes::kDanglingReference), Severity::Error,
                 context + " references unknown add-on \"" + name + "\"", "constraints",
                 text::normalize_name(name));
    }
  };

  for (const auto& [name, deps] : c.depends_on) {
    check_name(name, "dependsOn");
    for (const auto& dep : deps) {
      check_name(dep, "dependsOn");
      if (text::normalize_name(dep) == text::normalize_name(name)) {
        ledger.add(std::string(codes::kSelfDependency), Severity::Error,
                   "add-on \"" + name + "\" depends on itself", "constraints",
                   text::normalize_name(name));
      }
    }
  }
  for (const auto& [name, excluded] : c.excludes) {
    check_name(name, "excludes");
    for (const auto& other : excluded) check_name(other, "excludes");
  }
  for (const auto& name : c.standalone_allowed) check_name(name, "standaloneAllowed");
  return ledger;
}

SummaryCounts summarize(const Pricing& p) {
  return SummaryCounts{p.plans.size(), p.features.size(), p.usage_limits.size(),
                       p.add_ons.size()};
}

std::uint64_t configuration_space(const Pricing& p, const SubscriptionConstraints& c,
                                  std::uint64_t cap) {
  const std::size_t k = p.add_ons.size();
  const std::uint64_t buckets =
      static_cast<std::uint64_t>(p.plans.size()) + (c.standalone_allowed.empty() ? 0 : 1);

  if (k >= 63 || (buckets > 0 && (1ULL << k) > cap / std::max<std::uint64_t>(buckets, 1))) {
    throw PipelineError(ErrorCode::EnumerationCapExceeded,
                        "brute-force bound " + std::to_string(buckets) + " * 2^" +
                            std::to_string(k) + " exceeds the enumeration cap " +
                            std::to_string(cap));
  }

  // Index add-ons and precompute constraint masks.
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[text::normalize_name(p.add_ons[i].name)] = i;
  auto mask_of = [&](const std::set<std::string>& names) {
    std::uint64_t mask = 0;
    for (const auto& n : names) {
      auto it = index.find(text::normalize_name(n));
      if (it != index.end()) mask |= 1ULL << it->second;
    }
    return mask;
  };

  std::vector<std::uint64_t> depends(k, 0), excludes(k, 0);
  for (const auto& [owner, needed] : c.depends_on) {
    auto it = index.find(text::normalize_name(owner));
    if (it == index.end()) continue;
    depends[it->second] |= mask_of(needed);
  }
  // Symmetrize excludes: a subscription is invalid if either side lists the other.
  for (const auto& [owner, others] : c.excludes) {
    auto it = index.find(text::normalize_name(owner));
    if (it == index.end()) continue;
    std::uint64_t owner_bit = 1ULL << it->second;
    std::uint64_t others_mask = mask_of(others);
    excludes[it->second] |= others_mask;
    for (std::size_t i = 0; i < k; ++i) {
      if (others_mask & (1ULL << i)) excludes[i] |= owner_bit;
    }
  }

  auto valid = [&](std::uint64_t subset) {
    for (std::uint64_t rest = subset; rest;) {
      std::uint64_t bit = rest & (~rest + 1);
      std::size_t i = static_cast<std::size_t>(__builtin_ctzll(bit));
      if ((depends[i] & ~subset) != 0) return false;
      if ((excludes[i] & subset) != 0) return false;
      rest ^= bit;
    }
    return true;
  };

  auto count_subsets = [&](std::uint64_t available, bool include_empty) {
    std::uint64_t count = 0;
    std::uint64_t sub = available;
    while (true) {
      if ((sub != 0 || include_empty) && valid(sub)) ++count;
      if (sub == 0) break;
      sub = (sub - 1) & available;
    }
    return count;
  };

  std::uint64_t total = 0;
  for (const Plan& plan : p.plans) {
    const std::string plan_key = text::normalize_name(plan.name);
    std::uint64_t available = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const AddOn& a = p.add_ons[i];
      bool ok = a.available_for.all_plans;
      if (!ok) {
        for (const auto& n : a.available_for.plans) {
          if (text::normalize_name(n) == plan_key) {
            ok = true;
            break;
          }
        }
      }
      if (ok) available |= 1ULL << i;
    }
    total += count_subsets(available, /*include_empty=*/true);
  }

  if (!c.standalone_allowed.empty()) {
    std::uint64_t standalone_mask = mask_of(c.standalone_allowed);
    total += count_subsets(standalone_mask, /*include_empty=*/false);
  }
  return total;
}

}  // namespace ipricing
