#include "levyflow/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <thread>

#include <CLI11.hpp>

#include "levyflow/cli/formats.hpp"
#include "levyflow/cli/manifest.hpp"
#include "levyflow/cli/settings.hpp"
#include "levyflow/ensemble.hpp"
#include "levyflow/frac_laplacian.hpp"
#include "levyflow/levy_symbol.hpp"
#include "levyflow/spectral.hpp"

#ifndef LEVYFLOW_VERSION
#define LEVYFLOW_VERSION "0.0.0"
#endif

namespace levyflow::cli {

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ConfigParse:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::Io:
        return exit_code::config;
    case ErrorCode::SolverDiverged:
        return exit_code::solver;
    case ErrorCode::InvariantViolation:
        return exit_code::invariant;
    default:
        return exit_code::evaluation;
    }
}

namespace {

using nlohmann::json;

struct Context {
    const CommandOptions& opt;
    Settings settings;
    OutputDir out;
    RunManifest manifest;
    std::ostream& log;

    Context(const std::string& command, const CommandOptions& o, std::ostream& l)
        : opt(o), settings(resolve(o.config ? Ini::load(*o.config) : Ini{})), out(o.out), log(l) {
        manifest.tool_version = LEVYFLOW_VERSION;
        manifest.command = command;
        manifest.base_seed = o.seed;
        manifest.workers = resolved_workers();
        manifest.started = utc_now();
    }

    [[nodiscard]] unsigned resolved_workers() const {
        return opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    }

    void finish(const std::string& manifest_name = "manifest.json") {
        manifest.config_echo = to_ini(settings).dump();
        manifest.outputs = out.records();
        manifest.finished = utc_now();
        write_file(out.root() / manifest_name, manifest.to_json().dump(2) + "\n");
        log << "wrote " << out.records().size() << " files and " << manifest_name << " to " << out.root().string() << "\n";
    }
};

std::string step_tag(int step) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "step%04d", step);
    return buf;
}

std::string sample_tag(std::uint64_t id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%04llu", static_cast<unsigned long long>(id));
    return buf;
}

void write_field(OutputDir& out, const std::string& stem, const GridField& f) {
    out.write(stem + ".lvf", encode_lvf(f));
    out.write(stem + ".csv", field_csv(f));
}

// ---------------------------------------------------------------------------

int cmd_symbol(Context& ctx) {
    const SymbolSettings& y = ctx.settings.symbol;
    const levy::SymbolSpec spec =
        y.name == "alpha_stable" ? levy::SymbolSpec::stable(y.p, y.scale) : levy::named_symbol(y.name);
    CsvTable csv({"xi", "re_psi", "im_psi", "ratio"});
    double max_ratio = 0.0;
    double max_imag = 0.0;
    std::vector<double> xi(static_cast<std::size_t>(spec.dim()), 0.0);
    for (int i = 0; i < y.points; ++i) {
        xi[0] = y.xi_min + (y.xi_max - y.xi_min) * i / (y.points - 1);
        const levy::Complex psi = levy::eval_symbol(spec, xi);
        require(std::isfinite(psi.real()) && std::isfinite(psi.imag()), ErrorCode::InvalidArgument,
                "symbol is not finite at xi = " + csv_number(xi[0]));
        const double ratio = std::abs(psi) / (1.0 + xi[0] * xi[0]);
        max_ratio = std::max(max_ratio, ratio);
        max_imag = std::max(max_imag, std::abs(psi.imag()));
        csv.row({csv_number(xi[0]), csv_number(psi.real()), csv_number(psi.imag()), csv_number(ratio)});
    }
    ctx.out.write("symbol.csv", csv.str());
    ctx.manifest.summary = {{"symbol", y.name}, {"max_ratio", max_ratio}, {"max_abs_imag", max_imag}};
    ctx.log << y.name << ": sup |psi|/(1+xi^2) = " << csv_number(max_ratio) << " on [" << y.xi_min << ", " << y.xi_max << "]\n";
    ctx.finish();
    return exit_code::ok;
}

int cmd_fracheck(Context& ctx) {
    const FracheckSettings& f = ctx.settings.fracheck;
    CsvTable csv({"p", "mode", "M", "fd_eigenvalue", "exact_eigenvalue", "rel_error"});
    bool monotone = true;
    json failures = json::array();
    for (double p : f.exponents)
        for (int mode : f.modes) {
            double previous = INFINITY;
            for (int M : f.resolutions) {
                const Grid g = Grid::line(f.L, M);
                GridField u(g);
                for (int k = 0; k < M; ++k) u.at(k) = std::cos(2.0 * std::numbers::pi * mode * g.x(k) / f.L);
                const FracLapOperator op(g, p);
                const GridField fd = op.apply(u);
                const GridField exact = spectral_oracle(g, p, u);
                const double err = (fd - exact).max_abs() / exact.max_abs();
                const double lambda = -std::pow(2.0 * std::numbers::pi * mode / f.L, p);
                csv.row({csv_number(p), std::to_string(mode), std::to_string(M), csv_number(op.symbol(mode)), csv_number(lambda),
                         csv_number(err)});
                if (!(err < previous)) {
                    monotone = false;
                    failures.push_back({{"p", p}, {"mode", mode}, {"M", M}});
                }
                previous = err;
            }
        }
    ctx.out.write("fracheck.csv", csv.str());

    // Side checks: constants are annihilated, and p -> 2 recovers the 3-point Laplacian.
    const Grid g = Grid::line(f.L, f.resolutions.back());
    const double zero = FracLapOperator(g, f.exponents.front()).apply(GridField(g, 1.0)).max_abs();
    GridField smooth(g);
    for (int k = 0; k < g.Mx(); ++k) {
        const double x = 2.0 * std::numbers::pi * g.x(k) / f.L;
        smooth.at(k) = std::cos(x) + 0.5 * std::sin(2.0 * x + 0.3) + 0.25 * std::cos(3.0 * x + 1.1);
    }
    const GridField classical = apply_standard_laplacian(smooth);
    const double limit = (FracLapOperator(g, 1.999).apply(smooth) - classical).max_abs() / classical.max_abs();

    ctx.manifest.summary = {{"monotone", monotone}, {"failures", failures}, {"constant_field_max_abs", zero},
                            {"p1999_vs_laplacian_rel_diff", limit}};
    ctx.log << "error ladder " << (monotone ? "decreases" : "does NOT decrease") << " under refinement; constant field -> "
            << csv_number(zero) << "; p=1.999 vs 3-point Laplacian rel diff " << csv_number(limit) << "\n";
    ctx.finish();
    return monotone ? exit_code::ok : exit_code::convergence;
}

int cmd_micro(Context& ctx) {
    MicroConfig cfg = ctx.settings.micro;
    if (ctx.opt.steps) cfg.steps = *ctx.opt.steps;
    cfg.validate();
    const MicroRun run = run_micro(cfg, ctx.opt.seed, ctx.opt.sample);
    const MicroState& s = run.final_state;

    CsvTable survival({"step", "t", "alive", "fraction"});
    for (std::size_t n = 0; n < run.alive_per_step.size(); ++n)
        survival.row({std::to_string(n), csv_number(static_cast<double>(n) * cfg.tau), std::to_string(run.alive_per_step[n]),
                      csv_number(static_cast<double>(run.alive_per_step[n]) / cfg.M)});
    ctx.out.write("survival.csv", survival.str());

    CsvTable particles({"id", "x", "y", "vx", "vy", "Hi", "alive"});
    for (std::size_t i = 0; i < s.particles.size(); ++i) {
        const Particle& p = s.particles[i];
        particles.row({std::to_string(i), csv_number(p.X[0]), csv_number(p.X[1]), csv_number(p.V[0]), csv_number(p.V[1]),
                       csv_number(p.Hi), p.alive ? "1" : "0"});
    }
    ctx.out.write("particles.csv", particles.str());
    write_field(ctx.out, "He", s.He);
    write_field(ctx.out, "N", s.N);
    const auto [He_dep, N_dep] = deposit_fields(s, cfg);
    write_field(ctx.out, "He_deposit", He_dep);
    write_field(ctx.out, "N_deposit", N_dep);

    const bool monotone = std::is_sorted(run.alive_per_step.rbegin(), run.alive_per_step.rend());
    const bool finite = s.He.all_finite() && s.N.all_finite();
    const double S = survival_fraction(s, static_cast<std::size_t>(cfg.M));
    ctx.manifest.summary = {{"sample", ctx.opt.sample},   {"noise", noise_name(cfg.noise)}, {"survival", S},
                            {"clamp_events", s.clamp_events}, {"alive_nonincreasing", monotone}, {"fields_finite", finite}};
    ctx.log << "survival " << csv_number(S) << " (" << noise_name(cfg.noise) << ", " << cfg.steps << " steps), clamp events "
            << s.clamp_events << "\n";
    ctx.finish();
    require(monotone, ErrorCode::InvariantViolation, "monotone mortality: alive count increased");
    require(finite, ErrorCode::InvariantViolation, "finite fields: He or N holds a non-finite value");
    return exit_code::ok;
}

json diagnostics_json(const MacroDiagnostics& d) {
    return {{"clamp_events", d.clamp_events},
            {"n_monotonicity_violations", d.n_monotonicity_violations},
            {"max_residual", d.max_residual},
            {"alpha_min", d.alpha_min},
            {"alpha_max", d.alpha_max}};
}

void check_macro(const MacroDiagnostics& d, const MacroConfig& cfg) {
    require(d.n_monotonicity_violations == 0, ErrorCode::InvariantViolation,
            "N monotonicity: " + std::to_string(d.n_monotonicity_violations) + " nodes increased");
    require(d.max_residual <= cfg.solver.tolerance, ErrorCode::InvariantViolation, "solver residual above tolerance");
    if (d.alpha_max >= d.alpha_min)
        require(d.alpha_min >= cfg.alpha.a1 && d.alpha_max <= cfg.alpha.a2, ErrorCode::InvariantViolation,
                "alpha range: alpha left [a1, a2]");
}

MacroConfig macro_config(const Context& ctx) {
    MacroConfig cfg = ctx.settings.macro;
    if (ctx.opt.steps) {
        cfg.steps = *ctx.opt.steps;
        std::erase_if(cfg.snapshot_steps, [&](int s) { return s > cfg.steps; });
    }
    cfg.validate();
    return cfg;
}

int cmd_macro(Context& ctx) {
    const MacroConfig cfg = macro_config(ctx);
    CsvTable series({"step", "t", "alpha", "H_mean", "H_min", "H_max", "C_mean", "C_min", "C_max", "N_mean", "N_min", "N_max"});
    const auto observe = [&](const MacroState& s) {
        series.row({std::to_string(s.step), csv_number(s.t), csv_number(s.alpha), csv_number(s.H.mean()), csv_number(s.H.min()),
                    csv_number(s.H.max()), csv_number(s.C.mean()), csv_number(s.C.min()), csv_number(s.C.max()),
                    csv_number(s.N.mean()), csv_number(s.N.min()), csv_number(s.N.max())});
    };
    const MacroTrajectory traj = run_macro(cfg, ctx.opt.seed, ctx.opt.sample, observe);
    ctx.out.write("timeseries.csv", series.str());
    json snaps = json::array();
    for (const MacroState& s : traj.snapshots) {
        const std::string tag = step_tag(s.step);
        write_field(ctx.out, "H_" + tag, s.H);
        write_field(ctx.out, "C_" + tag, s.C);
        write_field(ctx.out, "N_" + tag, s.N);
        snaps.push_back({{"step", s.step}, {"t", s.t}, {"alpha", s.alpha}});
    }
    ctx.manifest.summary = {{"sample", ctx.opt.sample}, {"steps", cfg.steps}, {"snapshots", snaps},
                            {"diagnostics", diagnostics_json(traj.diagnostics)}};
    ctx.log << "macro run: " << cfg.steps << " steps, " << traj.snapshots.size() << " snapshots, clamp events "
            << traj.diagnostics.clamp_events << ", max residual " << csv_number(traj.diagnostics.max_residual) << "\n";
    ctx.finish();
    check_macro(traj.diagnostics, cfg);
    return exit_code::ok;
}

int cmd_ensemble(Context& ctx) {
    EnsembleConfig ens;
    ens.samples = ctx.opt.samples ? *ctx.opt.samples : ctx.settings.ensemble_samples();
    ens.base_seed = ctx.opt.seed;
    ens.workers = ctx.resolved_workers();
    for (auto id : ctx.settings.ensemble.export_samples)
        if (id < ens.samples) ens.export_samples.push_back(id);

    if (ctx.settings.ensemble.kind == EnsembleKind::Macro) {
        const MacroConfig cfg = macro_config(ctx);
        const MacroEnsembleStats stats = run_macro_ensemble(cfg, ens);
        CsvTable summary({"step", "t", "field", "mean_of_mean", "max_variance", "mean_variance"});
        for (const MacroSnapshotStats& snap : stats.snapshots) {
            const std::string tag = step_tag(snap.step);
            for (const auto& [name, fs] : {std::pair<std::string, const FieldStats*>{"H", &snap.H}, {"C", &snap.C}, {"N", &snap.N}}) {
                require(fs->variance.min() >= 0.0, ErrorCode::InvariantViolation, "variance sign: negative variance in " + name);
                write_field(ctx.out, "mean_" + name + "_" + tag, fs->mean);
                write_field(ctx.out, "var_" + name + "_" + tag, fs->variance);
                summary.row({std::to_string(snap.step), csv_number(snap.t), name, csv_number(fs->mean.mean()),
                             csv_number(fs->variance.max()), csv_number(fs->variance.mean())});
            }
        }
        ctx.out.write("ensemble_summary.csv", summary.str());
        for (const auto& [id, traj] : stats.exported)
            for (const MacroState& s : traj.snapshots) {
                const std::string stem = sample_tag(id) + "/";
                write_field(ctx.out, stem + "H_" + step_tag(s.step), s.H);
                write_field(ctx.out, stem + "C_" + step_tag(s.step), s.C);
                write_field(ctx.out, stem + "N_" + step_tag(s.step), s.N);
            }
        ctx.manifest.summary = {{"kind", "macro"},
                                {"samples", stats.samples},
                                {"alpha_final_mean", stats.alpha_final.mean},
                                {"diagnostics", diagnostics_json(stats.diagnostics)}};
        ctx.log << "macro ensemble: " << stats.samples << " samples on " << ens.workers << " workers, clamp events "
                << stats.diagnostics.clamp_events << "\n";
        ctx.finish();
        check_macro(stats.diagnostics, cfg);
        return exit_code::ok;
    }

    MicroConfig cfg = ctx.settings.micro;
    if (ctx.opt.steps) cfg.steps = *ctx.opt.steps;
    cfg.validate();
    const MicroEnsembleStats stats = run_micro_ensemble(cfg, ens);
    CsvTable survival({"sample", "survival"});
    for (std::size_t i = 0; i < stats.survival.size(); ++i) survival.row({std::to_string(i), csv_number(stats.survival[i])});
    ctx.out.write("survival.csv", survival.str());
    CsvTable alive({"step", "t", "mean_alive_fraction"});
    for (std::size_t n = 0; n < stats.mean_alive_fraction.size(); ++n)
        alive.row({std::to_string(n), csv_number(static_cast<double>(n) * cfg.tau), csv_number(stats.mean_alive_fraction[n])});
    ctx.out.write("alive_fraction.csv", alive.str());
    for (const auto& [id, run] : stats.exported) {
        CsvTable per({"step", "alive"});
        for (std::size_t n = 0; n < run.alive_per_step.size(); ++n) per.row({std::to_string(n), std::to_string(run.alive_per_step[n])});
        ctx.out.write(sample_tag(id) + "/survival.csv", per.str());
        write_field(ctx.out, sample_tag(id) + "/He", run.final_state.He);
        write_field(ctx.out, sample_tag(id) + "/N", run.final_state.N);
    }
    ctx.manifest.summary = {{"kind", "micro"},
                            {"noise", noise_name(cfg.noise)},
                            {"samples", stats.samples},
                            {"survival_mean", stats.survival_moments.mean},
                            {"survival_standard_error", stats.survival_moments.standard_error()},
                            {"clamp_events", stats.clamp_events}};
    ctx.log << "micro ensemble: " << stats.samples << " samples, survival " << csv_number(stats.survival_moments.mean) << " +- "
            << csv_number(stats.survival_moments.standard_error()) << "\n";
    ctx.finish();
    require(std::is_sorted(stats.mean_alive_fraction.rbegin(), stats.mean_alive_fraction.rend()), ErrorCode::InvariantViolation,
            "monotone mortality: mean alive fraction increased");
    return exit_code::ok;
}

int cmd_report(Context& ctx) {
    namespace fs = std::filesystem;
    const ReportSettings& rep = ctx.settings.report;
    const fs::path input = ctx.opt.input ? *ctx.opt.input : rep.input.empty() ? ctx.out.root() : fs::path(rep.input);
    require(fs::is_directory(input), ErrorCode::Io, "report input directory " + input.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(input))
        if (e.is_regular_file() && e.path().extension() == ".lvf") files.push_back(fs::relative(e.path(), input));
    require(!files.empty(), ErrorCode::Io, "no .lvf snapshots under " + input.string());
    std::sort(files.begin(), files.end());

    CsvTable contours({"file", "level", "x0", "y0", "x1", "y1"});
    json ranges = json::array();
    for (const fs::path& rel : files) {
        const RawField f = decode_lvf(read_file(input / rel));
        const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
        const double lo = rep.range ? rep.range->first : *mn;
        const double hi = rep.range ? rep.range->second : *mx;
        fs::path pgm = rel;
        pgm.replace_extension(".pgm");
        ctx.out.write(pgm.generic_string(), encode_pgm(f, lo, hi));

        std::vector<double> levels = rep.levels;
        if (levels.empty() && *mx > *mn)
            for (double q : {0.25, 0.5, 0.75}) levels.push_back(*mn + q * (*mx - *mn));
        for (const ContourSegment& s : marching_squares(f, levels))
            contours.row({rel.generic_string(), csv_number(s.level), csv_number(s.x0), csv_number(s.y0), csv_number(s.x1),
                          csv_number(s.y1)});
        ranges.push_back({{"file", rel.generic_string()}, {"lo", lo}, {"hi", hi}});
    }
    ctx.out.write("contours.csv", contours.str());
    ctx.manifest.summary = {{"input", input.string()}, {"fields", ranges}};
    ctx.log << "rendered " << files.size() << " fields\n";
    ctx.finish("report_manifest.json");
    return exit_code::ok;
}

} // namespace

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err) {
    try {
        Context ctx(name, opt, log);
        if (name == "symbol") return cmd_symbol(ctx);
        if (name == "fracheck") return cmd_fracheck(ctx);
        if (name == "micro") return cmd_micro(ctx);
        if (name == "macro") return cmd_macro(ctx);
        if (name == "ensemble") return cmd_ensemble(ctx);
        if (name == "report") return cmd_report(ctx);
        err << "levyflow: unknown command '" << name << "'\n";
        return exit_code::config;
    } catch (const Error& e) {
        err << "levyflow " << name << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "levyflow " << name << ": " << e.what() << "\n";
        return exit_code::config;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"levyflow: Levy-driven multiscale tumour simulations"};
    app.set_version_flag("--version", LEVYFLOW_VERSION);
    app.require_subcommand(1);

    CommandOptions opt;
    std::string config;
    std::string out = opt.out.string();
    app.add_option("--config", config, "Configuration file");
    app.add_option("--seed", opt.seed, "Base seed (u64)");
    app.add_option("--workers", opt.workers, "Worker threads (default: all cores)");
    app.add_option("--out", out, "Output directory (LEVYFLOW_OUT overrides)");

    std::string input;
    const auto sub = [&](const char* name, const char* what) {
        CLI::App* s = app.add_subcommand(name, what);
        s->fallthrough();
        return s;
    };
    sub("symbol", "Evaluate a named Levy symbol on a grid");
    sub("fracheck", "Convergence of the fractional Laplacian against the spectral oracle");
    CLI::App* micro = sub("micro", "Single particle-model run");
    CLI::App* macro = sub("macro", "Single macroscopic run");
    CLI::App* ensemble = sub("ensemble", "Monte Carlo ensemble");
    CLI::App* report = sub("report", "Render snapshots to PGM and contour CSV");
    for (CLI::App* s : {micro, macro, ensemble}) {
        s->add_option("--steps", opt.steps, "Override the step count");
    }
    for (CLI::App* s : {micro, macro}) s->add_option("--sample", opt.sample, "Stream index of the run");
    ensemble->add_option("--samples", opt.samples, "Override the sample count");
    report->add_option("--input", input, "Directory with .lvf snapshots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code::config;
    }

    if (!config.empty()) opt.config = config;
    if (!input.empty()) opt.input = input;
    opt.out = out;
    if (const char* env = std::getenv("LEVYFLOW_OUT"); env && *env) opt.out = env;
    return run_command(app.get_subcommands().front()->get_name(), opt, std::cout, std::cerr);
}

} // namespace levyflow::cli
