#pragma once

#include <string>
#include <vector>

namespace ipricing::cli {

// Exit codes are a published contract (see README):
//   0  success, possibly with warnings
//   1  score: unmatched gold/prediction files
//   2  ERROR-level diagnostics / document parse failure
//   3  pipeline failure (network, provider, assembly)
//   64 usage error
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnmatched = 1;
inline constexpr int kExitDiagnostics = 2;
inline constexpr int kExitPipelineFailure = 3;
inline constexpr int kExitUsage = 64;

int run(const std::vector<std::string>& args);

}  // namespace ipricing::cli
