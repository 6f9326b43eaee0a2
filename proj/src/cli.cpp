#include "ipricing/cli.hpp"
namespace ipricing::cli {
int run(const std::vector<std::string>&) { return kExitUsage; }
}  // namespace ipricing::cli
