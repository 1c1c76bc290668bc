#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace trunkload::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kUsageFailure = 2 };

/// Entry point of the `trunkload` tool; all output goes to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --model, else $TRUNKLOAD_DEFAULT_MODEL, else the shipped default model.
std::filesystem::path resolve_model_path(const std::string& flag);

/// Directory holding the shipped models/ and scenarios/.
std::filesystem::path data_dir();

}  // namespace trunkload::cli
