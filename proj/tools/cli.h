// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace discogan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Environment variable naming the default root for output directories.
inline constexpr const char* kRunRootEnv = "DISCOGAN_RUN_ROOT";

// args excludes the program name.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr);
int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                 std::ostream& err = std::cerr);

// Explicit path if given, otherwise $DISCOGAN_RUN_ROOT (default "runs") /
// <command>-<hash>.
std::filesystem::path resolve_output(const std::string& explicit_path, const std::string& command,
                                     const std::string& hash);

}  // namespace discogan::cli
