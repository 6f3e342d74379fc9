#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hclab {

// Exit codes: 0 success, 1 check failure or runtime error, 2 usage error.
constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// args excludes the program name.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hclab
