#include <sstream>

#include "ipricing/document.hpp"
#include "ipricing/text.hpp"

namespace ipricing::doc {

namespace {

std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

std::string render_price(const Price& p) {
  switch (p.kind) {
    case Price::Kind::Free: return "free";
    case Price::Kind::ContactSales: return "contact_sales";
    case Price::Kind::Amount: return p.amount.to_money_string();
  }
  return "contact_sales";
}

std::string render_limit(const LimitValue& v) {
  if (std::holds_alternative<Unlimited>(v)) return "unlimited";
  const auto& finite = std::get<FiniteLimit>(v);
  std::string unit = finite.unit;
  for (char& c : unit) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return finite.amount.to_string() + " " + unit;
}

std::string render_value(const FeatureValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
  return std::get<Decimal>(v).to_string();
}

// Emits override maps keyed in declaration order of the referenced list;
// names that resolve to nothing (invalid models) trail in lexical order.
template <typename Value, typename Render, typename Declared>
void write_map(std::ostringstream& out, int level, std::string_view key,
               const std::map<std::string, Value>& values, const Declared& declared,
               Render render) {
  if (values.empty()) return;
  out << indent(level) << key << ":\n";
  std::map<std::string, bool> emitted;
  for (const auto& decl : declared) {
    for (const auto& [name, value] : values) {
      if (text::normalize_name(name) == text::normalize_name(decl.name) && !emitted[name]) {
        out << indent(level + 1) << quote(name) << ": " << render(value) << "\n";
        emitted[name] = true;
      }
    }
  }
  for (const auto& [name, value] : values) {
    if (!emitted[name]) out << indent(level + 1) << quote(name) << ": " << render(value) << "\n";
  }
}

}  // namespace

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
  return out;
}

std::string serialize(const Pricing& p) {
  std::ostringstream out;
  out << "saasName: " << quote(p.saas_name) << "\n";
  out << "syntaxVersion: " << quote(p.syntax_version) << "\n";
  out << "sourceUrl: " << quote(p.source_url) << "\n";
  out << "extractionDate: " << p.extraction_date.to_string() << "\n";
  out << "currency: " << p.currency << "\n";

  if (!p.features.empty()) {
    out << "features:\n";
    for (const Feature& f : p.features) {
      out << "  - name: " << quote(f.name) << "\n";
      if (f.description) out << "    description: " << quote(*f.description) << "\n";
      out << "    valueType: " << value_type_name(f.value_type) << "\n";
      out << "    defaultValue: " << render_value(f.default_value) << "\n";
    }
  }

  if (!p.usage_limits.empty()) {
    out << "usageLimits:\n";
    for (const UsageLimit& u : p.usage_limits) {
      out << "  - name: " << quote(u.name) << "\n";
      out << "    value: " << render_limit(u.value) << "\n";
      if (!u.linked_features.empty()) {
        out << "    linkedFeatures:\n";
        for (const auto& linked : u.linked_features) {
          out << "      - " << quote(linked) << "\n";
        }
      }
    }
  }

  if (!p.plans.empty()) {
    out << "plans:\n";
    for (const Plan& plan : p.plans) {
      out << "  - name: " << quote(plan.name) << "\n";
      out << "    monthlyPrice: " << render_price(plan.monthly_price) << "\n";
      if (plan.annual_price) out << "    annualPrice: " << render_price(*plan.annual_price) << "\n";
      if (plan.currency != p.currency) out << "    currency: " << plan.currency << "\n";
      write_map(out, 2, "features", plan.feature_values, p.features, render_value);
      write_map(out, 2, "usageLimits", plan.usage_limit_values, p.usage_limits, render_limit);
    }
  }

  if (!p.add_ons.empty()) {
    out << "addOns:\n";
    for (const AddOn& a : p.add_ons) {
      out << "  - name: " << quote(a.name) << "\n";
      out << "    price: " << render_price(a.price) << "\n";
      if (a.unit) out << "    unit: " << quote(*a.unit) << "\n";
      if (a.available_for.all_plans) {
        out << "    availableFor: all\n";
      } else if (a.available_for.plans.empty()) {
        out << "    availableFor: none\n";
      } else {
        out << "    availableFor:\n";
        for (const auto& plan_name : a.available_for.plans) {
          out << "      - " << quote(plan_name) << "\n";
        }
      }
      if (a.standalone) out << "    standalone: true\n";
      write_map(out, 2, "features", a.feature_values, p.features, render_value);
      write_map(out, 2, "usageLimits", a.usage_limit_values, p.usage_limits, render_limit);
      write_map(out, 2, "usageLimitExtensions", a.usage_limit_extensions, p.usage_limits,
                render_limit);
    }
  }

  return out.str();
}

std::string write_log(const DiagnosticsLedger& ledger) {
  std::ostringstream out;
  for (const Diagnostic& d : ledger.entries()) {
    std::string subject = d.category.empty() ? "-" : d.category;
    if (!d.item.empty()) subject += "/" + d.item;
    out << severity_name(d.severity) << " " << d.code << " [" << subject << "] " << d.message;
    if (d.evidence && !d.evidence->empty()) out << " \xe2\x80\x94 " << *d.evidence;
    out << "\n";
  }
  return out.str();
}

}  // namespace ipricing::doc
