#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levyflow/grid.hpp"

namespace levyflow::cli {

/// Node values of a grid file: row-major with x fastest, Mx by My (My = 1 in 1D).
struct RawField {
    std::uint32_t Mx = 0;
    std::uint32_t My = 0;
    std::vector<double> values;

    [[nodiscard]] double at(std::uint32_t k, std::uint32_t j) const { return values[std::size_t{j} * Mx + k]; }
};

/// "LVF1", u32 Mx, u32 My, then Mx*My little-endian f64 values.
[[nodiscard]] std::string encode_lvf(const GridField& f);
[[nodiscard]] std::string encode_lvf(const RawField& f);
/// Throws Io on a malformed buffer.
[[nodiscard]] RawField decode_lvf(std::string_view bytes);

/// Number with 17 significant digits, '.' decimal point.
[[nodiscard]] std::string csv_number(double v);
/// RFC 4180 quoting when the cell contains a comma, quote or line break.
[[nodiscard]] std::string csv_escape(std::string_view cell);

/// Accumulates rows and renders them with CRLF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }
    [[nodiscard]] std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Field as a matrix: one CSV line per y row j = 0..My-1, Mx cells each, no header.
[[nodiscard]] std::string field_csv(const GridField& f);

/// g = floor((v - lo) / (hi - lo) * 255 + 0.5) clamped to [0, 255]; 128 when hi == lo.
[[nodiscard]] std::uint8_t gray_level(double v, double lo, double hi) noexcept;

/// Binary PGM (P5). Image row 0 is the top row j = My - 1 so y points up.
[[nodiscard]] std::string encode_pgm(const RawField& f, double lo, double hi);

/// Lower-case hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

struct ContourSegment {
    double level;
    double x0, y0, x1, y1;
};

/// Marching squares over the (Mx - 1) x (My - 1) interior cells. Coordinates are
/// in node-index units (x = k, y = j). Saddles are split by the cell-centre average.
[[nodiscard]] std::vector<ContourSegment> marching_squares(const RawField& f, std::span<const double> levels);

} // namespace levyflow::cli
