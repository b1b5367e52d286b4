// Command line front end. The entry point is a plain function so the whole
// surface (argument handling, output, exit codes) is testable in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcmq::cli {

// Exit codes are part of the contract:
//   0 success, 1 usage error, 2 ensemble parse/build failure,
//   3 degenerate ensemble, 4 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitVerify = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mcmq::cli
