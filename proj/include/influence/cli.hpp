#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "influence/report.hpp"

namespace influence::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageOrIo = 1,
    kDataError = 2,
    kNotConverged = 3,
};

enum class OutputFormat { Text, Json, Csv, Dot };

std::string_view to_string(OutputFormat format);

struct RunConfig {
    DatasetPaths paths;
    ReportConfig report;
    /// Empty or "-" writes to stdout.
    std::string output;
    OutputFormat format = OutputFormat::Text;
};

/// Runs one invocation. `args` excludes the program name. The environment
/// variable INFLUENCE_LOG (error, warn, info, debug) sets stderr verbosity.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to a temporary file next to `path` and renames it into
/// place, so a failed run never leaves a truncated file behind.
void write_atomically(const std::filesystem::path& path, std::string_view content);

} // namespace influence::cli
