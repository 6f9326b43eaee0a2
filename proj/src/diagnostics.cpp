#include "ipricing/diagnostics.hpp"

#include <algorithm>
#include <array>

namespace ipricing {

std::string_view severity_name(Severity s) {
  return s == Severity::Error ? "ERROR" : "WARNING";
}

void DiagnosticsLedger::add(std::string code, Severity severity, std::string message,
                            std::string category, std::string item,
                            std::optional<std::string> evidence) {
  entries_.push_back(Diagnostic{std::move(code), severity, std::move(message), std::move(category),
                                std::move(item), std::move(evidence)});
}

void DiagnosticsLedger::extend(const DiagnosticsLedger& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

bool DiagnosticsLedger::has_errors() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::size_t DiagnosticsLedger::count(std::string_view code) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

namespace codes {

bool is_registered(std::string_view code) {
  static constexpr std::array<std::string_view, 27> all = {
      kEmptyName,         kDuplicatePlan,      kDuplicateFeature, kDuplicateUsageLimit,
      kDuplicateAddOn,    kDanglingReference,  kValueTypeMismatch, kNegativePrice,
      kNegativeLimit,     kMissingUnit,        kInvalidCurrency,  kPlanAddOnCollision,
      kNoSubscriptionPath, kSelfDependency,    kDuplicateMerged,  kValueConflict,
      kAnnualExceedsMonthly, kImplausibleDiscount, kUngroundedItem, kOrphanValue,
      kSuspectPlanCount,  kMergeConflict,      kPassFailed,       kUnparseablePrice,
      kUsageLimitCandidate, kDroppedItem,      kAssemblyFailed,
  };
  return std::find(all.begin(), all.end(), code) != all.end();
}

}  // namespace codes

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FetchFailed: return "FETCH_FAILED";
    case ErrorCode::RenderTimeout: return "RENDER_TIMEOUT";
    case ErrorCode::FileNotFound: return "FILE_NOT_FOUND";
    case ErrorCode::EmptyAfterClean: return "EMPTY_AFTER_CLEAN";
    case ErrorCode::ProviderError: return "PROVIDER_ERROR";
    case ErrorCode::ParseFailed: return "PARSE_FAILED";
    case ErrorCode::EnumerationCapExceeded: return "ENUMERATION_CAP_EXCEEDED";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::AssemblyFailed: return "ASSEMBLY_FAILED";
  }
  return "UNKNOWN";
}

}  // namespace ipricing
