#include "levyflow/cli/formats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "levyflow/errors.hpp"

namespace levyflow::cli {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

std::uint64_t get_le(std::string_view s, std::size_t at, int bytes) {
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) v |= std::uint64_t{static_cast<unsigned char>(s[at + static_cast<std::size_t>(b)])} << (8 * b);
    return v;
}

std::string encode(std::uint32_t Mx, std::uint32_t My, std::span<const double> values) {
    std::string out = "LVF1";
    out.reserve(12 + 8 * values.size());
    put_u32(out, Mx);
    put_u32(out, My);
    for (double v : values) put_f64(out, v);
    return out;
}

} // namespace

std::string encode_lvf(const GridField& f) {
    return encode(static_cast<std::uint32_t>(f.grid().Mx()), static_cast<std::uint32_t>(f.grid().My()), f.values());
}

std::string encode_lvf(const RawField& f) { return encode(f.Mx, f.My, f.values); }

RawField decode_lvf(std::string_view bytes) {
    require(bytes.size() >= 12 && bytes.substr(0, 4) == "LVF1", ErrorCode::Io, "not an LVF1 grid file");
    RawField f;
    f.Mx = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
    f.My = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
    const std::size_t n = std::size_t{f.Mx} * f.My;
    require(f.Mx > 0 && f.My > 0 && bytes.size() == 12 + 8 * n, ErrorCode::Io, "LVF1 size does not match its header");
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = std::bit_cast<double>(get_le(bytes, 12 + 8 * i, 8));
    return f;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(std::string_view cell) {
    if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    require(cells.size() == header_.size(), ErrorCode::DimensionMismatch, "CSV row width differs from header");
    rows_.push_back(std::move(cells));
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cells[i]);
        }
        out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string field_csv(const GridField& f) {
    std::string out;
    const Grid& g = f.grid();
    for (int j = 0; j < g.My(); ++j) {
        for (int k = 0; k < g.Mx(); ++k) {
            if (k) out += ',';
            out += csv_number(f.at(k, j));
        }
        out += "\r\n";
    }
    return out;
}

std::uint8_t gray_level(double v, double lo, double hi) noexcept {
    if (!(hi > lo)) return 128;
    const double g = std::floor((v - lo) / (hi - lo) * 255.0 + 0.5);
    return static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
}

std::string encode_pgm(const RawField& f, double lo, double hi) {
    std::string out = "P5\n" + std::to_string(f.Mx) + " " + std::to_string(f.My) + "\n255\n";
    for (std::uint32_t r = 0; r < f.My; ++r) {
        const std::uint32_t j = f.My - 1 - r;
        for (std::uint32_t k = 0; k < f.Mx; ++k) out.push_back(static_cast<char>(gray_level(f.at(k, j), lo, hi)));
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        raise(ErrorCode::Io, "SHA-256 computation failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xf]);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(ErrorCode::Io, "cannot write " + path.string());
}

std::vector<ContourSegment> marching_squares(const RawField& f, std::span<const double> levels) {
    std::vector<ContourSegment> segs;
    if (f.Mx < 2 || f.My < 2) return segs;
    for (double level : levels) {
        for (std::uint32_t j = 0; j + 1 < f.My; ++j)
            for (std::uint32_t k = 0; k + 1 < f.Mx; ++k) {
                // Corners counter-clockwise from (k, j).
                const double v[4] = {f.at(k, j), f.at(k + 1, j), f.at(k + 1, j + 1), f.at(k, j + 1)};
                const double cx[4] = {0.0, 1.0, 1.0, 0.0};
                const double cy[4] = {0.0, 0.0, 1.0, 1.0};
                int mask = 0;
                for (int c = 0; c < 4; ++c)
                    if (v[c] >= level) mask |= 1 << c;
                if (mask == 0 || mask == 15) continue;

                // Crossing point on edge e, which joins corners e and e + 1.
                const auto cross = [&](int e) {
                    const int a = e;
                    const int b = (e + 1) % 4;
                    const double t = (level - v[a]) / (v[b] - v[a]);
                    return std::pair{k + cx[a] + t * (cx[b] - cx[a]), j + cy[a] + t * (cy[b] - cy[a])};
                };
                const auto emit = [&](int e0, int e1) {
                    const auto [x0, y0] = cross(e0);
                    const auto [x1, y1] = cross(e1);
                    segs.push_back({level, x0, y0, x1, y1});
                };

                std::vector<int> edges;
                for (int e = 0; e < 4; ++e) {
                    const bool a = (mask >> e) & 1;
                    const bool b = (mask >> ((e + 1) % 4)) & 1;
                    if (a != b) edges.push_back(e);
                }
                if (edges.size() == 2) {
                    emit(edges[0], edges[1]);
                } else {
                    // Saddle: corners 0 and 2 share a side. If the centre agrees with
                    // corner 0 the diagonal through 0 and 2 is connected.
                    const bool centre = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                    const bool c0 = mask & 1;
                    if (centre == c0) {
                        emit(0, 1);
                        emit(2, 3);
                    } else {
                        emit(3, 0);
                        emit(1, 2);
                    }
                }
            }
    }
    return segs;
}

} // namespace levyflow::cli
