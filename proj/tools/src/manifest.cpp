#include "levyflow/cli/manifest.hpp"

#include <chrono>
#include <ctime>

#include "levyflow/cli/formats.hpp"
#include "levyflow/errors.hpp"

namespace levyflow::cli {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"sha256", o.sha256}});
    return {{"tool", "levyflow"},
            {"tool_version", tool_version},
            {"command", command},
            {"base_seed", base_seed},
            {"workers", workers},
            {"started", started},
            {"finished", finished},
            {"config", config_echo},
            {"summary", summary},
            {"outputs", outs}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.config_echo = j.at("config").get<std::string>();
        m.base_seed = j.at("base_seed").get<std::uint64_t>();
        m.workers = j.at("workers").get<unsigned>();
        m.started = j.at("started").get<std::string>();
        m.finished = j.at("finished").get<std::string>();
        m.summary = j.value("summary", nlohmann::json::object());
        for (const auto& o : j.at("outputs"))
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("bytes").get<std::uint64_t>(), o.at("sha256").get<std::string>()});
        return m;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::Io, std::string("malformed manifest: ") + e.what());
    }
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) { std::filesystem::create_directories(root_); }

void OutputDir::write(const std::string& relative, std::string_view bytes) {
    write_file(root_ / relative, bytes);
    records_.push_back({relative, bytes.size(), sha256_hex(bytes)});
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> verify_outputs(const RunManifest& m, const std::filesystem::path& root) {
    std::vector<std::string> bad;
    for (const auto& o : m.outputs) {
        try {
            const std::string bytes = read_file(root / o.path);
            if (bytes.size() != o.bytes || sha256_hex(bytes) != o.sha256) bad.push_back(o.path);
        } catch (const Error&) {
            bad.push_back(o.path);
        }
    }
    return bad;
}

} // namespace levyflow::cli
