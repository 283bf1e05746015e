#include "levyflow/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "levyflow/errors.hpp"

namespace levyflow {

void EnsembleConfig::validate() const {
    require(samples >= 1, ErrorCode::ConfigInvalid, "ensemble needs at least one sample");
    for (std::uint64_t id : export_samples)
        require(id < samples, ErrorCode::ConfigInvalid, "export id " + std::to_string(id) + " is not a sample id");
}

void parallel_ordered(std::uint64_t count, unsigned workers, const std::function<void(std::uint64_t)>& compute,
                      const std::function<void(std::uint64_t)>& consume) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t batch = static_cast<std::uint64_t>(workers) * 4;
    for (std::uint64_t begin = 0; begin < count; begin += batch) {
        const std::uint64_t end = std::min(count, begin + batch);
        std::vector<std::exception_ptr> errors(end - begin);
        std::atomic<std::uint64_t> next{begin};
        const auto work = [&] {
            for (std::uint64_t i = next++; i < end; i = next++) {
                try {
                    compute(i);
                } catch (...) {
                    errors[i - begin] = std::current_exception();
                }
            }
        };
        const auto n_threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, end - begin));
        if (n_threads <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(n_threads);
            for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work);
        }
        for (std::uint64_t i = begin; i < end; ++i) {
            if (errors[i - begin]) std::rethrow_exception(errors[i - begin]);
            consume(i);
        }
    }
}

namespace {

template <class Fn>
auto with_sample_context(std::uint64_t id, std::uint64_t seed, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        raise(e.code(), "sample " + std::to_string(id) + " (base seed " + std::to_string(seed) + ", stream " +
                            std::to_string(id) + ") failed: " + e.what());
    }
}

bool exported(const EnsembleConfig& ens, std::uint64_t id) {
    return std::find(ens.export_samples.begin(), ens.export_samples.end(), id) != ens.export_samples.end();
}

FieldStats to_stats(const Grid& g, const FieldMoments& m) { return {GridField(g, m.mean()), GridField(g, m.variance())}; }

} // namespace

MacroEnsembleStats run_macro_ensemble(const MacroConfig& cfg, const EnsembleConfig& ens) {
    cfg.validate();
    ens.validate();
    const Grid& g = cfg.grid;
    const std::uint64_t batch_slots = ens.samples;
    std::vector<std::optional<MacroTrajectory>> slots(batch_slots);

    MacroEnsembleStats stats;
    stats.samples = ens.samples;
    std::vector<std::array<FieldMoments, 3>> acc;

    parallel_ordered(
        ens.samples, ens.workers,
        [&](std::uint64_t id) {
            slots[id] = with_sample_context(id, ens.base_seed, [&] { return run_macro(cfg, ens.base_seed, id); });
        },
        [&](std::uint64_t id) {
            MacroTrajectory traj = std::move(*slots[id]);
            slots[id].reset();
            if (acc.empty()) {
                for (const MacroState& s : traj.snapshots) {
                    acc.push_back({FieldMoments(g.size()), FieldMoments(g.size()), FieldMoments(g.size())});
                    stats.snapshots.push_back({s.step, s.t, {GridField(g), GridField(g)}, {GridField(g), GridField(g)},
                                               {GridField(g), GridField(g)}});
                }
            }
            require(traj.snapshots.size() == acc.size(), ErrorCode::InvariantViolation, "snapshot count differs between samples");
            for (std::size_t s = 0; s < acc.size(); ++s) {
                acc[s][0].push(traj.snapshots[s].H.values());
                acc[s][1].push(traj.snapshots[s].C.values());
                acc[s][2].push(traj.snapshots[s].N.values());
            }
            stats.alpha_final.push(traj.snapshots.back().alpha);
            MacroDiagnostics& d = stats.diagnostics;
            d.clamp_events += traj.diagnostics.clamp_events;
            d.n_monotonicity_violations += traj.diagnostics.n_monotonicity_violations;
            d.max_residual = std::max(d.max_residual, traj.diagnostics.max_residual);
            d.alpha_min = std::min(d.alpha_min, traj.diagnostics.alpha_min);
            d.alpha_max = std::max(d.alpha_max, traj.diagnostics.alpha_max);
            if (exported(ens, id)) stats.exported.emplace_back(id, std::move(traj));
        });

    for (std::size_t s = 0; s < acc.size(); ++s) {
        stats.snapshots[s].H = to_stats(g, acc[s][0]);
        stats.snapshots[s].C = to_stats(g, acc[s][1]);
        stats.snapshots[s].N = to_stats(g, acc[s][2]);
    }
    return stats;
}

MicroEnsembleStats run_micro_ensemble(const MicroConfig& cfg, const EnsembleConfig& ens) {
    cfg.validate();
    ens.validate();
    std::vector<std::optional<MicroRun>> slots(ens.samples);

    MicroEnsembleStats stats;
    stats.samples = ens.samples;
    stats.survival.reserve(ens.samples);
    std::optional<FieldMoments> alive;

    parallel_ordered(
        ens.samples, ens.workers,
        [&](std::uint64_t id) {
            slots[id] = with_sample_context(id, ens.base_seed, [&] { return run_micro(cfg, ens.base_seed, id); });
        },
        [&](std::uint64_t id) {
            MicroRun run = std::move(*slots[id]);
            slots[id].reset();
            const auto M0 = static_cast<std::size_t>(cfg.M);
            const double s = survival_fraction(run.final_state, M0);
            stats.survival.push_back(s);
            stats.survival_moments.push(s);
            std::vector<double> frac(run.alive_per_step.size());
            for (std::size_t n = 0; n < frac.size(); ++n)
                frac[n] = static_cast<double>(run.alive_per_step[n]) / static_cast<double>(M0);
            if (!alive) alive.emplace(frac.size());
            alive->push(frac);
            stats.clamp_events += run.final_state.clamp_events;
            if (exported(ens, id)) stats.exported.emplace_back(id, std::move(run));
        });
    stats.mean_alive_fraction = alive->mean();
    return stats;
}

} // namespace levyflow
