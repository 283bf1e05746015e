#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace levyflow::cli {

struct OutputRecord {
    std::string path; ///< relative to the output directory, '/' separated
    std::uint64_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    std::string tool_version;
    std::string command;
    std::string config_echo; ///< resolved configuration in config-file syntax
    std::uint64_t base_seed = 0;
    unsigned workers = 0;
    std::string started;
    std::string finished;
    std::vector<OutputRecord> outputs;
    nlohmann::json summary = nlohmann::json::object();

    [[nodiscard]] nlohmann::json to_json() const;
    /// Throws Io on missing fields.
    static RunManifest from_json(const nlohmann::json& j);
};

/// Writes files under a root directory and records their digests.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root);

    [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }
    void write(const std::string& relative, std::string_view bytes);
    [[nodiscard]] const std::vector<OutputRecord>& records() const noexcept { return records_; }

private:
    std::filesystem::path root_;
    std::vector<OutputRecord> records_;
};

/// UTC wall time, ISO 8601 with seconds.
[[nodiscard]] std::string utc_now();

/// Re-reads every listed output below root and compares sizes and digests.
/// Returns the paths that do not verify.
[[nodiscard]] std::vector<std::string> verify_outputs(const RunManifest& m, const std::filesystem::path& root);

} // namespace levyflow::cli
