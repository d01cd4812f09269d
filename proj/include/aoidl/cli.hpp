#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aoidl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // invalid scenario or failed check
inline constexpr int kExitUsage = 2;

/// Default output directory when --out is not given.
inline constexpr const char* kOutDirEnv = "AOIDL_OUT_DIR";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aoidl::cli
