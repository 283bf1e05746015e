#include "levyflow/cli/settings.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <system_error>

#include "levyflow/errors.hpp"
#include "levyflow/levy_symbol.hpp"

namespace levyflow::cli {

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) raise(ErrorCode::InvalidArgument, "cannot format number");
    return {buf, end};
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (const auto& x : v) {
        if (!out.empty()) out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(x);
        else
            out += std::to_string(x);
    }
    return out;
}

class SectionReader {
public:
    SectionReader(const Ini& ini, std::string name) : section_(ini.section(name)), name_(std::move(name)) {}

    template <class T>
    void get(const std::string& key, T& target) {
        const std::string* raw = lookup(key);
        if (raw) target = parse<T>(key, *raw);
    }

    /// Raw text of an optional key.
    const std::string* raw(const std::string& key) { return lookup(key); }

    template <class T>
    T parse(const std::string& key, const std::string& text) const {
        if constexpr (std::is_same_v<T, std::string>) {
            return text;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (text == "true") return true;
            if (text == "false") return false;
            fail(key, text, "expected true or false");
        } else if constexpr (std::is_arithmetic_v<T>) {
            T v{};
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc{} || end != text.data() + text.size()) fail(key, text, "expected a number");
            return v;
        } else {
            T out;
            for (const auto& item : split_list(text)) out.push_back(parse<typename T::value_type>(key, item));
            return out;
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& text, const std::string& what) const {
        raise(ErrorCode::ConfigParse, "[" + name_ + "] " + key + " = '" + text + "': " + what);
    }

    void finish() const {
        if (!section_) return;
        for (const auto& [k, v] : section_->entries)
            if (!used_.contains(k)) raise(ErrorCode::ConfigParse, "unknown key '" + k + "' in [" + name_ + "]");
    }

private:
    const std::string* lookup(const std::string& key) {
        used_.insert(key);
        if (!section_) return nullptr;
        for (const auto& [k, v] : section_->entries)
            if (k == key) return &v;
        return nullptr;
    }

    const Ini::Section* section_;
    std::string name_;
    std::set<std::string> used_;
};

void read_macro(const Ini& ini, Settings& s) {
    SectionReader r(ini, "macro");
    MacroConfig& m = s.macro;
    double& h_x1 = s.h_x1;
    double& h_x2 = s.h_x2;
    int N_x1 = m.grid.Mx();
    int N_x2 = m.grid.My();
    r.get("N", m.steps);
    r.get("M", s.macro_M);
    r.get("tau", m.tau);
    r.get("h_x1", h_x1);
    r.get("h_x2", h_x2);
    r.get("N_x1", N_x1);
    r.get("N_x2", N_x2);
    r.get("gamma_1", m.rates.gamma_1);
    r.get("gamma_2", m.rates.gamma_2);
    r.get("gamma_3", m.rates.gamma_3);
    r.get("sigma_W", m.rates.sigma_W);
    r.get("sigma_H", m.rates.sigma_H);
    r.get("gamma_C", m.rates.gamma_C);
    r.get("gamma_g", m.rates.gamma_g);
    r.get("gamma_h", m.rates.gamma_h);
    r.get("gamma_f", m.rates.gamma_f);
    r.get("alpha_a", m.alpha.a);
    r.get("alpha_a1", m.alpha.a1);
    r.get("alpha_a2", m.alpha.a2);
    r.get("qwiener_modes", m.qwiener.modes);
    r.get("solver_tolerance", m.solver.tolerance);
    r.get("solver_max_iterations", m.solver.max_iterations);
    r.get("frac_cutoff_cells", m.frac.cutoff_cells);
    if (const std::string* tail = r.raw("frac_tail_terms")) {
        if (*tail == "folded")
            m.frac.tail_terms.reset();
        else
            m.frac.tail_terms = r.parse<long>("frac_tail_terms", *tail);
    }
    r.get("noise", m.noise);
    r.get("scheme_literal", m.scheme_literal);
    r.get("snapshot_steps", m.snapshot_steps);
    r.get("h_amplitude", m.initial.h_amplitude);
    r.get("h_width", m.initial.h_width);
    r.get("c_amplitude", m.initial.c_amplitude);
    r.get("c_width", m.initial.c_width);
    r.get("n_smoothing", m.initial.n_smoothing);
    r.get("tissue_seed", m.initial.tissue_seed);
    r.finish();

    require(h_x1 > 0.0 && h_x2 > 0.0 && N_x1 >= 3 && N_x2 >= 3, ErrorCode::ConfigInvalid,
            "[macro] needs positive spacings and at least 3 nodes per axis");
    require(s.macro_M >= 1, ErrorCode::ConfigInvalid, "[macro] M must be at least 1");
    m.grid = Grid::plane(h_x1 * N_x1, h_x2 * N_x2, N_x1, N_x2);
    m.qwiener.Lx = m.grid.Lx();
    m.qwiener.Ly = m.grid.Ly();
    m.validate();
    for (int step : m.snapshot_steps)
        require(step >= 0 && step <= m.steps, ErrorCode::ConfigInvalid, "[macro] snapshot step outside [0, N]");
}

void read_micro(const Ini& ini, Settings& s) {
    SectionReader r(ini, "micro");
    MicroConfig& m = s.micro;
    GaussianNoise gauss = std::holds_alternative<GaussianNoise>(m.noise) ? std::get<GaussianNoise>(m.noise) : GaussianNoise{};
    SwitchingNoise sw;
    CauchyModulatedNoise cm;
    std::string noise = noise_name(m.noise);
    std::vector<double> weights(sw.weights.begin(), sw.weights.end());

    r.get("M", m.M);
    r.get("N", m.steps);
    r.get("tau", m.tau);
    r.get("noise", noise);
    r.get("noise_intensity", m.noise_intensity);
    r.get("gauss_mean", gauss.mean);
    r.get("gauss_sd", gauss.sd);
    r.get("switch_weights", weights);
    r.get("laplace_loc", sw.laplace_loc);
    r.get("laplace_scale", sw.laplace_scale);
    r.get("tri_left", sw.tri_left);
    r.get("tri_mode", sw.tri_mode);
    r.get("tri_right", sw.tri_right);
    r.get("cauchy_amplitude", cm.amplitude);
    r.get("cauchy_loc", cm.cauchy_loc);
    r.get("cauchy_scale", cm.cauchy_scale);
    r.get("taxis_sign", m.taxis_sign);
    r.get("h1", m.h1);
    r.get("h2", m.h2);
    r.get("h3", m.h3);
    r.get("k_T", m.k_T);
    r.get("k_B", m.k_B);
    r.get("q0", m.q0);
    r.get("k_V", m.k_V);
    r.get("gamma", m.gamma);
    r.get("L", m.L);
    r.get("field_cells", m.field_cells);
    r.get("sigma_dep", m.sigma_dep);
    r.get("lattice_width", m.lattice_width);
    r.get("hi0", m.hi0);
    r.get("he_amplitude", m.he_amplitude);
    r.get("he_width", m.he_width);
    r.get("n_smoothing", m.n_smoothing);
    r.get("tissue_seed", m.tissue_seed);
    r.finish();

    require(weights.size() == 3, ErrorCode::ConfigInvalid, "[micro] switch_weights needs three values");
    std::copy(weights.begin(), weights.end(), sw.weights.begin());
    if (noise == "gaussian")
        m.noise = gauss;
    else if (noise == "switching")
        m.noise = sw;
    else if (noise == "cauchy_modulated")
        m.noise = cm;
    else
        raise(ErrorCode::ConfigInvalid, "[micro] unknown noise law '" + noise + "'");
    m.validate();
}

void read_ensemble(const Ini& ini, Settings& s) {
    SectionReader r(ini, "ensemble");
    std::string kind = s.ensemble.kind == EnsembleKind::Macro ? "macro" : "micro";
    r.get("kind", kind);
    if (const std::string* samples = r.raw("samples")) {
        if (*samples == "auto")
            s.ensemble.samples.reset();
        else
            s.ensemble.samples = r.parse<std::uint64_t>("samples", *samples);
    }
    r.get("export", s.ensemble.export_samples);
    r.finish();
    if (kind == "macro")
        s.ensemble.kind = EnsembleKind::Macro;
    else if (kind == "micro")
        s.ensemble.kind = EnsembleKind::Micro;
    else
        raise(ErrorCode::ConfigInvalid, "[ensemble] kind must be macro or micro, got '" + kind + "'");
    require(!s.ensemble.samples || *s.ensemble.samples >= 1, ErrorCode::ConfigInvalid, "[ensemble] samples must be at least 1");
}

void read_symbol(const Ini& ini, Settings& s) {
    SectionReader r(ini, "symbol");
    SymbolSettings& y = s.symbol;
    r.get("name", y.name);
    r.get("p", y.p);
    r.get("scale", y.scale);
    r.get("xi_min", y.xi_min);
    r.get("xi_max", y.xi_max);
    r.get("points", y.points);
    r.finish();
    try {
        (void)levy::named_symbol(y.name);
    } catch (const Error&) {
        raise(ErrorCode::ConfigInvalid, "[symbol] unknown symbol name '" + y.name + "'");
    }
    require(y.p > 0.0 && y.p <= 2.0 && y.scale >= 0.0, ErrorCode::ConfigInvalid, "[symbol] needs p in (0, 2] and scale >= 0");
    require(y.xi_min < y.xi_max && y.points >= 2, ErrorCode::ConfigInvalid, "[symbol] needs xi_min < xi_max and points >= 2");
}

void read_fracheck(const Ini& ini, Settings& s) {
    SectionReader r(ini, "fracheck");
    FracheckSettings& f = s.fracheck;
    r.get("p", f.exponents);
    r.get("L", f.L);
    r.get("resolutions", f.resolutions);
    r.get("modes", f.modes);
    r.finish();
    require(!f.exponents.empty() && !f.resolutions.empty() && !f.modes.empty(), ErrorCode::ConfigInvalid,
            "[fracheck] lists must be nonempty");
    require(f.L > 0.0, ErrorCode::ConfigInvalid, "[fracheck] L must be positive");
    for (double p : f.exponents) require(p > 0.0 && p < 2.0, ErrorCode::ConfigInvalid, "[fracheck] p must lie in (0, 2)");
    require(std::is_sorted(f.resolutions.begin(), f.resolutions.end()) && f.resolutions.front() >= 4, ErrorCode::ConfigInvalid,
            "[fracheck] resolutions must be increasing and at least 4");
    for (int m : f.modes)
        require(m >= 1 && 2 * m < f.resolutions.front(), ErrorCode::ConfigInvalid, "[fracheck] modes must lie below the Nyquist mode");
}

void read_report(const Ini& ini, Settings& s) {
    SectionReader r(ini, "report");
    ReportSettings& rep = s.report;
    r.get("input", rep.input);
    if (const std::string* levels = r.raw("levels")) {
        if (*levels == "auto")
            rep.levels.clear();
        else
            rep.levels = r.parse<std::vector<double>>("levels", *levels);
    }
    if (const std::string* range = r.raw("range")) {
        if (*range == "auto") {
            rep.range.reset();
        } else {
            const auto v = r.parse<std::vector<double>>("range", *range);
            if (v.size() != 2 || !(v[0] < v[1])) r.fail("range", *range, "expected 'auto' or 'lo, hi' with lo < hi");
            rep.range = std::pair{v[0], v[1]};
        }
    }
    r.finish();
}

} // namespace

std::uint64_t Settings::ensemble_samples() const {
    if (ensemble.samples) return *ensemble.samples;
    return ensemble.kind == EnsembleKind::Macro ? macro_M : 100;
}

Settings resolve(const Ini& ini) {
    static const std::set<std::string> known{"macro", "micro", "ensemble", "symbol", "fracheck", "report"};
    for (const auto& sec : ini.sections())
        require(known.contains(sec.name), ErrorCode::ConfigParse, "unknown section [" + sec.name + "]");
    Settings s;
    read_macro(ini, s);
    read_micro(ini, s);
    read_ensemble(ini, s);
    read_symbol(ini, s);
    read_fracheck(ini, s);
    read_report(ini, s);
    return s;
}

Ini to_ini(const Settings& s) {
    Ini ini;
    const auto num = [](double v) { return format_double(v); };
    const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };

    const MacroConfig& m = s.macro;
    ini.set("macro", "N", std::to_string(m.steps));
    ini.set("macro", "M", std::to_string(s.macro_M));
    ini.set("macro", "tau", num(m.tau));
    ini.set("macro", "h_x1", num(s.h_x1));
    ini.set("macro", "h_x2", num(s.h_x2));
    ini.set("macro", "N_x1", std::to_string(m.grid.Mx()));
    ini.set("macro", "N_x2", std::to_string(m.grid.My()));
    ini.set("macro", "gamma_1", num(m.rates.gamma_1));
    ini.set("macro", "gamma_2", num(m.rates.gamma_2));
    ini.set("macro", "gamma_3", num(m.rates.gamma_3));
    ini.set("macro", "sigma_W", num(m.rates.sigma_W));
    ini.set("macro", "sigma_H", num(m.rates.sigma_H));
    ini.set("macro", "gamma_C", num(m.rates.gamma_C));
    ini.set("macro", "gamma_g", num(m.rates.gamma_g));
    ini.set("macro", "gamma_h", num(m.rates.gamma_h));
    ini.set("macro", "gamma_f", num(m.rates.gamma_f));
    ini.set("macro", "alpha_a", num(m.alpha.a));
    ini.set("macro", "alpha_a1", num(m.alpha.a1));
    ini.set("macro", "alpha_a2", num(m.alpha.a2));
    ini.set("macro", "qwiener_modes", std::to_string(m.qwiener.modes));
    ini.set("macro", "solver_tolerance", num(m.solver.tolerance));
    ini.set("macro", "solver_max_iterations", std::to_string(m.solver.max_iterations));
    ini.set("macro", "frac_cutoff_cells", std::to_string(m.frac.cutoff_cells));
    ini.set("macro", "frac_tail_terms", m.frac.tail_terms ? std::to_string(*m.frac.tail_terms) : "folded");
    ini.set("macro", "noise", flag(m.noise));
    ini.set("macro", "scheme_literal", flag(m.scheme_literal));
    ini.set("macro", "snapshot_steps", join(m.snapshot_steps));
    ini.set("macro", "h_amplitude", num(m.initial.h_amplitude));
    ini.set("macro", "h_width", num(m.initial.h_width));
    ini.set("macro", "c_amplitude", num(m.initial.c_amplitude));
    ini.set("macro", "c_width", num(m.initial.c_width));
    ini.set("macro", "n_smoothing", num(m.initial.n_smoothing));
    ini.set("macro", "tissue_seed", std::to_string(m.initial.tissue_seed));

    const MicroConfig& u = s.micro;
    const GaussianNoise gauss = std::holds_alternative<GaussianNoise>(u.noise) ? std::get<GaussianNoise>(u.noise) : GaussianNoise{};
    const SwitchingNoise sw = std::holds_alternative<SwitchingNoise>(u.noise) ? std::get<SwitchingNoise>(u.noise) : SwitchingNoise{};
    const CauchyModulatedNoise cm =
        std::holds_alternative<CauchyModulatedNoise>(u.noise) ? std::get<CauchyModulatedNoise>(u.noise) : CauchyModulatedNoise{};
    ini.set("micro", "M", std::to_string(u.M));
    ini.set("micro", "N", std::to_string(u.steps));
    ini.set("micro", "tau", num(u.tau));
    ini.set("micro", "noise", noise_name(u.noise));
    ini.set("micro", "noise_intensity", num(u.noise_intensity));
    ini.set("micro", "gauss_mean", num(gauss.mean));
    ini.set("micro", "gauss_sd", num(gauss.sd));
    ini.set("micro", "switch_weights", join(std::vector<double>(sw.weights.begin(), sw.weights.end())));
    ini.set("micro", "laplace_loc", num(sw.laplace_loc));
    ini.set("micro", "laplace_scale", num(sw.laplace_scale));
    ini.set("micro", "tri_left", num(sw.tri_left));
    ini.set("micro", "tri_mode", num(sw.tri_mode));
    ini.set("micro", "tri_right", num(sw.tri_right));
    ini.set("micro", "cauchy_amplitude", num(cm.amplitude));
    ini.set("micro", "cauchy_loc", num(cm.cauchy_loc));
    ini.set("micro", "cauchy_scale", num(cm.cauchy_scale));
    ini.set("micro", "taxis_sign", num(u.taxis_sign));
    ini.set("micro", "h1", num(u.h1));
    ini.set("micro", "h2", num(u.h2));
    ini.set("micro", "h3", num(u.h3));
    ini.set("micro", "k_T", num(u.k_T));
    ini.set("micro", "k_B", num(u.k_B));
    ini.set("micro", "q0", num(u.q0));
    ini.set("micro", "k_V", num(u.k_V));
    ini.set("micro", "gamma", num(u.gamma));
    ini.set("micro", "L", num(u.L));
    ini.set("micro", "field_cells", std::to_string(u.field_cells));
    ini.set("micro", "sigma_dep", num(u.sigma_dep));
    ini.set("micro", "lattice_width", num(u.lattice_width));
    ini.set("micro", "hi0", num(u.hi0));
    ini.set("micro", "he_amplitude", num(u.he_amplitude));
    ini.set("micro", "he_width", num(u.he_width));
    ini.set("micro", "n_smoothing", num(u.n_smoothing));
    ini.set("micro", "tissue_seed", std::to_string(u.tissue_seed));

    ini.set("ensemble", "kind", s.ensemble.kind == EnsembleKind::Macro ? "macro" : "micro");
    ini.set("ensemble", "samples", std::to_string(s.ensemble_samples()));
    ini.set("ensemble", "export", join(s.ensemble.export_samples));

    ini.set("symbol", "name", s.symbol.name);
    ini.set("symbol", "p", num(s.symbol.p));
    ini.set("symbol", "scale", num(s.symbol.scale));
    ini.set("symbol", "xi_min", num(s.symbol.xi_min));
    ini.set("symbol", "xi_max", num(s.symbol.xi_max));
    ini.set("symbol", "points", std::to_string(s.symbol.points));

    ini.set("fracheck", "p", join(s.fracheck.exponents));
    ini.set("fracheck", "L", num(s.fracheck.L));
    ini.set("fracheck", "resolutions", join(s.fracheck.resolutions));
    ini.set("fracheck", "modes", join(s.fracheck.modes));

    ini.set("report", "input", s.report.input);
    ini.set("report", "levels", s.report.levels.empty() ? "auto" : join(s.report.levels));
    ini.set("report", "range",
            s.report.range ? num(s.report.range->first) + ", " + num(s.report.range->second) : std::string("auto"));
    return ini;
}

} // namespace levyflow::cli
