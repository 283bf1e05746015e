#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;     ///< config parse failure, unknown names, missing inputs
inline constexpr int evaluation = 3; ///< numerical evaluation errors
inline constexpr int convergence = 4;
inline constexpr int solver = 5;
inline constexpr int invariant = 6;
} // namespace exit_code

[[nodiscard]] int exit_code_for(ErrorCode code) noexcept;

struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::uint64_t seed = 1;
    unsigned workers = 0; ///< 0: all available cores
    std::filesystem::path out = "levyflow_out";
    std::optional<int> steps;
    std::optional<std::uint64_t> samples;
    std::uint64_t sample = 0;
    std::optional<std::filesystem::path> input;
};

/// Runs one subcommand and maps library errors onto exit codes. Progress goes
/// to `log`, error messages to `err`.
[[nodiscard]] int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err);

/// Full command line: parses argv (honouring LEVYFLOW_OUT) and dispatches.
[[nodiscard]] int run_cli(int argc, char** argv);

} // namespace levyflow::cli
