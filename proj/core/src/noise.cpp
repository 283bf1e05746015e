#include "levyflow/noise.hpp"

#include <cmath>

#include "levyflow/errors.hpp"

namespace levyflow {

void validate(const NoiseModel& model) {
    if (const auto* g = std::get_if<GaussianNoise>(&model)) {
        require(g->sd >= 0.0, ErrorCode::ConfigInvalid, "Gaussian noise sd must be nonnegative");
    } else if (const auto* s = std::get_if<SwitchingNoise>(&model)) {
        double total = 0.0;
        for (double w : s->weights) {
            require(w >= 0.0, ErrorCode::ConfigInvalid, "switching weights must be nonnegative");
            total += w;
        }
        require(std::abs(total - 1.0) < 1e-12, ErrorCode::ConfigInvalid, "switching weights must sum to 1");
        require(s->tri_left <= s->tri_mode && s->tri_mode <= s->tri_right && s->tri_left < s->tri_right,
                ErrorCode::ConfigInvalid, "triangular law needs left <= mode <= right");
        require(s->laplace_scale > 0.0, ErrorCode::ConfigInvalid, "Laplace scale must be positive");
    } else {
        const auto& c = std::get<CauchyModulatedNoise>(model);
        require(c.cauchy_scale > 0.0, ErrorCode::ConfigInvalid, "Cauchy scale must be positive");
    }
}

std::string noise_name(const NoiseModel& model) {
    switch (model.index()) {
    case 0: return "gaussian";
    case 1: return "switching";
    default: return "cauchy_modulated";
    }
}

NoiseModel noise_from_name(const std::string& name) {
    if (name == "gaussian") return GaussianNoise{};
    if (name == "switching") return SwitchingNoise{};
    if (name == "cauchy_modulated") return CauchyModulatedNoise{};
    raise(ErrorCode::ConfigInvalid, "unknown noise model '" + name + "'");
}

SwitchBranch select_switch_branch(const SwitchingNoise& model, double u) noexcept {
    if (u < model.weights[0]) return SwitchBranch::Gaussian;
    if (u < model.weights[0] + model.weights[1]) return SwitchBranch::Laplace;
    return SwitchBranch::Triangular;
}

double draw_switching_with_selector(const SwitchingNoise& model, double u, RngStream& rng, double dt) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    const double scale = std::sqrt(dt);
    switch (select_switch_branch(model, u)) {
    case SwitchBranch::Gaussian: return scale * rng.normal();
    case SwitchBranch::Laplace: return scale * rng.laplace(model.laplace_loc, model.laplace_scale);
    case SwitchBranch::Triangular: return scale * rng.triangular(model.tri_left, model.tri_mode, model.tri_right);
    }
    return 0.0;
}

double cauchy_modulated_increment(const CauchyModulatedNoise& model, double sigma, double z, double dt) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    return model.amplitude * std::sin(sigma) * std::sqrt(dt) * z;
}

double draw_noise(const NoiseModel& model, RngStream& rng, double dt) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    if (const auto* g = std::get_if<GaussianNoise>(&model)) return std::sqrt(dt) * (g->mean + g->sd * rng.normal());
    if (const auto* s = std::get_if<SwitchingNoise>(&model)) return draw_switching_with_selector(*s, rng.uniform(), rng, dt);
    const auto& c = std::get<CauchyModulatedNoise>(model);
    const double sigma = rng.cauchy(c.cauchy_loc, c.cauchy_scale);
    return cauchy_modulated_increment(c, sigma, rng.normal(), dt);
}

} // namespace levyflow
