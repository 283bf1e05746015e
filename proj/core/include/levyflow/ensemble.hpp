#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "levyflow/macro_sim.hpp"
#include "levyflow/micro_sim.hpp"
#include "levyflow/welford.hpp"

namespace levyflow {

struct EnsembleConfig {
    std::uint64_t samples = 500;
    std::uint64_t base_seed = 0;
    /// 0 means std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Sample ids whose full output is kept.
    std::vector<std::uint64_t> export_samples;

    /// Throws ConfigInvalid.
    void validate() const;
};

struct FieldStats {
    GridField mean;
    GridField variance;
};

struct MacroSnapshotStats {
    int step = 0;
    double t = 0.0;
    FieldStats H;
    FieldStats C;
    FieldStats N;
};

struct MacroEnsembleStats {
    std::uint64_t samples = 0;
    std::vector<MacroSnapshotStats> snapshots;
    Moments alpha_final;
    MacroDiagnostics diagnostics; ///< clamp/violation counts summed, residual and alpha ranges over all samples
    std::vector<std::pair<std::uint64_t, MacroTrajectory>> exported;
};

struct MicroEnsembleStats {
    std::uint64_t samples = 0;
    std::vector<double> survival; ///< by sample id
    Moments survival_moments;
    /// Mean alive fraction after each step.
    std::vector<double> mean_alive_fraction;
    std::size_t clamp_events = 0;
    std::vector<std::pair<std::uint64_t, MicroRun>> exported;
};

/// Runs the samples in parallel on stream index = sample id and folds them
/// into the accumulators strictly in id order, so the statistics are bit
/// identical for any worker count. A failing sample aborts the run with an
/// Error naming the sample id and seed.
[[nodiscard]] MacroEnsembleStats run_macro_ensemble(const MacroConfig& cfg, const EnsembleConfig& ens);
[[nodiscard]] MicroEnsembleStats run_micro_ensemble(const MicroConfig& cfg, const EnsembleConfig& ens);

/// Calls compute(i) for i in [0, count) on `workers` threads, batch by batch, and
/// consume(i) on the calling thread in increasing i once i's batch is done.
/// compute must only touch state owned by index i. The first failing index (in
/// id order) is rethrown before its consume call.
void parallel_ordered(std::uint64_t count, unsigned workers, const std::function<void(std::uint64_t)>& compute,
                      const std::function<void(std::uint64_t)>& consume);

} // namespace levyflow
