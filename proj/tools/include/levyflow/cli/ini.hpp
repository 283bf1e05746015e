#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace levyflow::cli {

/// Sectioned key/value document. See docs/config.md for the grammar.
/// Sections and keys keep their file order; duplicates are rejected.
class Ini {
public:
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;

        friend bool operator==(const Section&, const Section&) = default;
    };

    /// Throws ConfigParse with the origin and line number.
    static Ini parse(std::string_view text, const std::string& origin = "<string>");
    /// Throws Io if the file cannot be read, ConfigParse on bad content.
    static Ini load(const std::filesystem::path& path);

    [[nodiscard]] const std::vector<Section>& sections() const noexcept { return sections_; }
    [[nodiscard]] const Section* section(std::string_view name) const noexcept;
    [[nodiscard]] const std::string* find(std::string_view section, std::string_view key) const noexcept;

    /// Inserts or overwrites, creating the section on demand.
    void set(const std::string& section, const std::string& key, std::string value);

    [[nodiscard]] std::string dump() const;

    friend bool operator==(const Ini&, const Ini&) = default;

private:
    Section& section_for(const std::string& name);

    std::vector<Section> sections_;
};

} // namespace levyflow::cli
