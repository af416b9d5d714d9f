#pragma once

/**
 * @file job.hpp
 * @brief Batch jobs: TOML in, JSON report out.
 *
 * A job names paths and functions, then lists tasks that refer to them.
 * Every reference is resolved before any task runs, so a typo fails fast
 * with the offending key path. Tasks that fail at run time are recorded in
 * their report entry and do not stop later tasks.
 *
 *   [config]        tol, max_levels, min_levels, tag, seed
 *   [paths.NAME]    kind = identity | segment | bicircle | expr | polyline
 *   [functions.NAME] f or f1/f2, optional F or F1/F2, var (default "z")
 *   [[tasks]]       type, path, function, id, per-task overrides
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hypercurve/error.hpp"

namespace hypercurve::job {

/// Input problem tied to a dotted key path such as "tasks[2].path".
class SchemaError : public Error {
public:
    SchemaError(std::string key_path, const std::string& what);

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

struct RunOptions {
    /// Overrides [config].seed for props-check tasks without their own seed.
    std::optional<std::uint64_t> seed;
    bool parallel = false;
    /// Default tolerance when the job sets none (HYPERCURVE_TOL).
    std::optional<double> default_tol;
    /// Echoed as the report's "job" field.
    std::string source_name;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitFailed = 2;

struct RunResult {
    /// Pretty-printed JSON, newline terminated.
    std::string report;
    int exit_code = kExitOk;
};

/// Throws SchemaError on malformed input; task-level failures land in the report.
RunResult run_job_text(std::string_view toml_text, const RunOptions& opts = {});
RunResult run_job_file(const std::filesystem::path& file, RunOptions opts = {});

/// Reads HYPERCURVE_TOL; throws SchemaError when it is set but not a positive number.
std::optional<double> tolerance_from_env();

} // namespace hypercurve::job
