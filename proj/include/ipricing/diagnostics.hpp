#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipricing {

enum class Severity { Warning, Error };

std::string_view severity_name(Severity s);

// One validation/processing finding. `category`/`item` identify the subject;
// `evidence` carries a source snippet when one exists.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Warning;
  std::string message;
  std::string category;
  std::string item;
  std::optional<std::string> evidence;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Ordered findings; order is generation order and is part of the contract.
class DiagnosticsLedger {
 public:
  void add(std::string code, Severity severity, std::string message, std::string category = {},
           std::string item = {}, std::optional<std::string> evidence = std::nullopt);
  void extend(const DiagnosticsLedger& other);

  const std::vector<Diagnostic>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  bool has_errors() const;
  std::size_t count(std::string_view code) const;

  friend bool operator==(const DiagnosticsLedger&, const DiagnosticsLedger&) = default;

 private:
  std::vector<Diagnostic> entries_;
};

// Closed registry of diagnostic codes (see docs/diagnostics.md).
namespace codes {
// Model validation (ERROR severity).
inline constexpr std::string_view kEmptyName = "EMPTY_NAME";
inline constexpr std::string_view kDuplicatePlan = "DUPLICATE_PLAN";
inline constexpr std::string_view kDuplicateFeature = "DUPLICATE_FEATURE";
inline constexpr std::string_view kDuplicateUsageLimit = "DUPLICATE_USAGE_LIMIT";
inline constexpr std::string_view kDuplicateAddOn = "DUPLICATE_ADDON";
inline constexpr std::string_view kDanglingReference = "DANGLING_REFERENCE";
inline constexpr std::string_view kValueTypeMismatch = "VALUE_TYPE_MISMATCH";
inline constexpr std::string_view kNegativePrice = "NEGATIVE_PRICE";
inline constexpr std::string_view kNegativeLimit = "NEGATIVE_LIMIT";
inline constexpr std::string_view kMissingUnit = "MISSING_UNIT";
inline constexpr std::string_view kInvalidCurrency = "INVALID_CURRENCY";
inline constexpr std::string_view kPlanAddOnCollision = "PLAN_ADDON_COLLISION";
inline constexpr std::string_view kNoSubscriptionPath = "NO_SUBSCRIPTION_PATH";
inline constexpr std::string_view kSelfDependency = "SELF_DEPENDENCY";
// Process engine (WARNING severity).
inline constexpr std::string_view kDuplicateMerged = "DUPLICATE_MERGED";
inline constexpr std::string_view kValueConflict = "VALUE_CONFLICT";
inline constexpr std::string_view kAnnualExceedsMonthly = "ANNUAL_EXCEEDS_MONTHLY";
inline constexpr std::string_view kImplausibleDiscount = "IMPLAUSIBLE_DISCOUNT";
inline constexpr std::string_view kUngroundedItem = "UNGROUNDED_ITEM";
inline constexpr std::string_view kOrphanValue = "ORPHAN_VALUE";
inline constexpr std::string_view kSuspectPlanCount = "SUSPECT_PLAN_COUNT";
inline constexpr std::string_view kMergeConflict = "MERGE_CONFLICT";
inline constexpr std::string_view kPassFailed = "PASS_FAILED";
inline constexpr std::string_view kUnparseablePrice = "UNPARSEABLE_PRICE";
inline constexpr std::string_view kUsageLimitCandidate = "USAGE_LIMIT_CANDIDATE";
inline constexpr std::string_view kDroppedItem = "DROPPED_ITEM";
// Pipeline-level failure recorded in the ledger.
inline constexpr std::string_view kAssemblyFailed = "ASSEMBLY_FAILED";

bool is_registered(std::string_view code);
}  // namespace codes

// Operational failure codes (thrown, not ledger entries).
enum class ErrorCode {
  FetchFailed,
  RenderTimeout,
  FileNotFound,
  EmptyAfterClean,
  ProviderError,
  ParseFailed,
  EnumerationCapExceeded,
  SyntaxError,
  AssemblyFailed,
};

std::string_view error_code_name(ErrorCode code);

class PipelineError : public std::runtime_error {
 public:
  PipelineError(ErrorCode code, const std::string& message, bool transient = false)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        transient_(transient) {}
  ErrorCode code() const { return code_; }
  bool transient() const { return transient_; }

 private:
  ErrorCode code_;
  bool transient_;
};

}  // namespace ipricing
