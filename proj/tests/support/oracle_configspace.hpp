#pragma once

// Independent reference enumerator for the subscription configuration space.
// Deliberately naive: name sets and recursive subset expansion, no bitmasks,
// so it shares no code path with the production implementation.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ipricing/model.hpp"
#include "ipricing/text.hpp"

namespace ipricing::testing {

inline std::uint64_t oracle_configuration_space(const Pricing& p,
                                                const SubscriptionConstraints& c) {
  using text::normalize_name;

  auto normalized_set = [](const std::set<std::string>& in) {
    std::set<std::string> out;
    for (const auto& s : in) out.insert(normalize_name(s));
    return out;
  };

  std::map<std::string, std::set<std::string>> depends, excludes;
  for (const auto& [k, v] : c.depends_on) depends[normalize_name(k)] = normalized_set(v);
  for (const auto& [k, v] : c.excludes) {
    auto key = normalize_name(k);
    for (const auto& other : normalized_set(v)) {
      excludes[key].insert(other);
      excludes[other].insert(key);  // symmetric by definition
    }
  }

  auto satisfied = [&](const std::set<std::string>& chosen) {
    for (const auto& name : chosen) {
      if (auto it = depends.find(name); it != depends.end()) {
        for (const auto& needed : it->second) {
          if (!chosen.count(needed)) return false;
        }
      }
      if (auto it = excludes.find(name); it != excludes.end()) {
        for (const auto& banned : it->second) {
          if (chosen.count(banned)) return false;
        }
      }
    }
    return true;
  };

  // All subsets of `names`, recursively.
  std::vector<std::set<std::string>> subsets;
  std::function<void(const std::vector<std::string>&, std::size_t, std::set<std::string>&)> rec =
      [&](const std::vector<std::string>& names, std::size_t i, std::set<std::string>& acc) {
        if (i == names.size()) {
          subsets.push_back(acc);
          return;
        }
        rec(names, i + 1, acc);
        acc.insert(names[i]);
        rec(names, i + 1, acc);
        acc.erase(names[i]);
      };

  std::uint64_t total = 0;
  for (const Plan& plan : p.plans) {
    std::vector<std::string> available;
    for (const AddOn& a : p.add_ons) {
      bool ok = a.available_for.all_plans;
      for (const auto& n : a.available_for.plans) {
        if (normalize_name(n) == normalize_name(plan.name)) ok = true;
      }
      if (ok) available.push_back(normalize_name(a.name));
    }
    subsets.clear();
    std::set<std::string> acc;
    rec(available, 0, acc);
    for (const auto& s : subsets) {
      if (satisfied(s)) ++total;
    }
  }

  std::set<std::string> standalone_names = normalized_set(c.standalone_allowed);
  std::vector<std::string> standalone;
  for (const AddOn& a : p.add_ons) {
    if (standalone_names.count(normalize_name(a.name))) {
      standalone.push_back(normalize_name(a.name));
    }
  }
  if (!standalone.empty()) {
    subsets.clear();
    std::set<std::string> acc;
    rec(standalone, 0, acc);
    for (const auto& s : subsets) {
      if (!s.empty() && satisfied(s)) ++total;
    }
  }
  return total;
}

}  // namespace ipricing::testing
