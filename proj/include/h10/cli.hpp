#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace h10::cli {

/// Exit codes for `solve`; other subcommands use only kOk and kError.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kInconclusive = 2;

/// Key holding the wall-clock time in the solve report; the only
/// nondeterministic field.
inline constexpr const char* kTimestampKey = "generated_at";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace h10::cli
