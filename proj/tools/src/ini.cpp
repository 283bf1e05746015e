#include "levyflow/cli/ini.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "levyflow/errors.hpp"

namespace levyflow::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    });
}

} // namespace

Ini Ini::parse(std::string_view text, const std::string& origin) {
    Ini ini;
    Section* current = nullptr;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        const auto fail = [&](const std::string& what) {
            raise(ErrorCode::ConfigParse, origin + ":" + std::to_string(line_no) + ": " + what);
        };

        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (!valid_name(name)) fail("bad section name '" + name + "'");
            if (ini.section(name)) fail("duplicate section [" + name + "]");
            ini.sections_.push_back({name, {}});
            current = &ini.sections_.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!valid_name(key)) fail("bad key '" + key + "'");
        if (!current) fail("key '" + key + "' outside any section");
        for (const auto& [k, v] : current->entries)
            if (k == key) fail("duplicate key '" + key + "' in [" + current->name + "]");
        current->entries.emplace_back(key, value);
    }
    return ini;
}

Ini Ini::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

const Ini::Section* Ini::section(std::string_view name) const noexcept {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

const std::string* Ini::find(std::string_view section_name, std::string_view key) const noexcept {
    const Section* s = section(section_name);
    if (!s) return nullptr;
    for (const auto& [k, v] : s->entries)
        if (k == key) return &v;
    return nullptr;
}

Ini::Section& Ini::section_for(const std::string& name) {
    for (auto& s : sections_)
        if (s.name == name) return s;
    sections_.push_back({name, {}});
    return sections_.back();
}

void Ini::set(const std::string& section_name, const std::string& key, std::string value) {
    Section& s = section_for(section_name);
    for (auto& [k, v] : s.entries)
        if (k == key) {
            v = std::move(value);
            return;
        }
    s.entries.emplace_back(key, std::move(value));
}

std::string Ini::dump() const {
    std::string out;
    for (const auto& s : sections_) {
        if (!out.empty()) out += '\n';
        out += '[' + s.name + "]\n";
        for (const auto& [k, v] : s.entries) out += k + " = " + v + '\n';
    }
    return out;
}

} // namespace levyflow::cli
