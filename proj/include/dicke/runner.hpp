#pragma once

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "dicke/config.hpp"

namespace dicke {

inline constexpr const char* artifact_name = "dicke-suite";
inline constexpr const char* artifact_version = "1.0.0";

// Process exit codes.
enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_convergence = 3, exit_resource = 4 };

// Runs one command, writes its result files into out_dir, then writes
// manifest.json (config echo, version, seed, wall time, SHA-256 of every
// result file). Result files depend only on (config, seed). Returns the
// result file names in the order they were written.
std::vector<std::string> run(const RunConfig& config, const std::filesystem::path& out_dir,
                             int workers = 1);

int exit_code_for(const std::exception& error);

// error.json: {"status": "error", "category", "exit_code", "message"}.
void write_error_record(const std::filesystem::path& out_dir, const std::exception& error);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace dicke
