#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace bcclab::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 1729;

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

/// Parses args (without the program name), runs one subcommand and writes its
/// report records to out. Diagnostics and usage go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bcclab::cli
