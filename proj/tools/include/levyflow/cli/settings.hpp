#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyflow/cli/ini.hpp"
#include "levyflow/macro_sim.hpp"
#include "levyflow/micro_sim.hpp"

namespace levyflow::cli {

struct SymbolSettings {
    std::string name = "alpha_stable";
    /// Exponent and scale used when name is alpha_stable.
    double p = 1.5;
    double scale = 1.0;
    double xi_min = -10.0;
    double xi_max = 10.0;
    int points = 201;
};

struct FracheckSettings {
    std::vector<double> exponents{0.5, 1.0, 1.5};
    double L = 1.0;
    std::vector<int> resolutions{64, 128, 256};
    std::vector<int> modes{1, 2, 3};
};

enum class EnsembleKind { Macro, Micro };

struct EnsembleSettings {
    EnsembleKind kind = EnsembleKind::Macro;
    /// Unset: the [macro] M for macro ensembles, 100 for micro ensembles.
    std::optional<std::uint64_t> samples;
    std::vector<std::uint64_t> export_samples{0};
};

struct ReportSettings {
    /// Directory with .lvf snapshots; empty means the output directory.
    std::string input;
    /// Contour levels; empty means the quartiles of each field's range.
    std::vector<double> levels;
    /// Fixed gray-scale range; unset means each field's own [min, max].
    std::optional<std::pair<double, double>> range;
};

/// Fully resolved configuration: every key has a value.
struct Settings {
    MacroConfig macro;
    std::uint64_t macro_M = 500;
    /// Macro grid spacings as written; macro.grid is rebuilt from them.
    double h_x1 = 0.1;
    double h_x2 = 0.1;
    MicroConfig micro;
    EnsembleSettings ensemble;
    SymbolSettings symbol;
    FracheckSettings fracheck;
    ReportSettings report;

    [[nodiscard]] std::uint64_t ensemble_samples() const;
};

/// Fills defaults for missing keys. Unknown sections or keys and malformed
/// values throw ConfigParse; values that parse but break a model constraint
/// throw ConfigInvalid.
[[nodiscard]] Settings resolve(const Ini& ini);

/// Every key with its resolved value; resolve(to_ini(s)) reproduces s.
[[nodiscard]] Ini to_ini(const Settings& s);

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double v);

} // namespace levyflow::cli
