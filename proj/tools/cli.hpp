#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rothaff::cli {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rothaff::cli
