#pragma once

// Lévy symbols (continuous negative definite functions) and their
// Lévy–Khintchine quadruples.
//
// Convention: the characteristic function of the process is
// E exp(i<xi, X_t>) = exp(-t psi(xi)), so Re psi >= 0 everywhere and the
// generator acts as -psi(D). The drift therefore enters as -i<b, xi>.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace levyflow::levy {

using Complex = std::complex<double>;
using Point = std::vector<double>;

// ---------------------------------------------------------------------------
// Jump laws and Lévy measures

/// Discrete jump law: mu = sum_k prob_k delta_{point_k}.
struct AtomLaw {
    std::vector<Point> points;
    std::vector<double> probs;
};

/// Centered isotropic Gaussian jump law N(0, sigma^2 I).
struct GaussianLaw {
    double sigma = 1.0;
};

using JumpLaw = std::variant<AtomLaw, GaussianLaw>;

struct ZeroMeasure {};

/// nu = sum_k weight_k delta_{point_k}; no atom at the origin.
struct AtomMeasure {
    std::vector<Point> points;
    std::vector<double> weights;
};

/// Symmetric stable tail nu(dy) = scale * c_{1,p} |y|^{-1-p} dy on R \ {0}.
/// The normalization makes the resulting symbol exactly scale * |xi|^p.
struct StableDensity {
    double p = 1.0;
    double scale = 1.0;
};

/// nu = intensity * mu for a probability jump law mu.
struct CompoundPoissonMeasure {
    double intensity = 1.0;
    JumpLaw law;
};

using LevyMeasureSpec = std::variant<ZeroMeasure, AtomMeasure, StableDensity, CompoundPoissonMeasure>;

/// (a, b, Q, nu). Validated on construction: a >= 0, Q symmetric PSD, nu admissible.
class LevyQuadruple {
public:
    LevyQuadruple(double killing, Eigen::VectorXd drift, Eigen::MatrixXd diffusion, LevyMeasureSpec measure);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(drift_.size()); }
    [[nodiscard]] double killing() const noexcept { return killing_; }
    [[nodiscard]] const Eigen::VectorXd& drift() const noexcept { return drift_; }
    [[nodiscard]] const Eigen::MatrixXd& diffusion() const noexcept { return diffusion_; }
    [[nodiscard]] const LevyMeasureSpec& measure() const noexcept { return measure_; }

private:
    double killing_;
    Eigen::VectorXd drift_;
    Eigen::MatrixXd diffusion_;
    LevyMeasureSpec measure_;
};

// ---------------------------------------------------------------------------
// Bernstein functions used as outer functions in subordination

struct PowerBernstein {
    double alpha = 0.5; // (0, 1]
};
struct IdentityBernstein {};
/// c0 + c1 * lambda^alpha
struct AffinePowerBernstein {
    double c0 = 0.0;
    double c1 = 1.0;
    double alpha = 0.5;
};

using BernsteinSpec = std::variant<PowerBernstein, IdentityBernstein, AffinePowerBernstein>;

[[nodiscard]] double eval_bernstein(const BernsteinSpec& f, double lambda);

// ---------------------------------------------------------------------------
// Symbol specifications

class SymbolSpec;
using SymbolPtr = std::shared_ptr<const SymbolSpec>;

namespace sym {
/// psi = 1/2 <xi, Q xi>
struct Quadratic {
    Eigen::MatrixXd Q;
};
/// psi = -i <b, xi> + 1/2 <xi, Q xi>
struct DriftQuadratic {
    Eigen::VectorXd b;
    Eigen::MatrixXd Q;
};
/// psi = scale * |xi|^p with spectral exponent p in (0, 2].
struct Stable {
    double p = 1.0;
    double scale = 1.0;
};
/// Unit jumps along the first axis: psi = lambda (1 - e^{i xi_1}).
struct Poisson {
    double lambda = 1.0;
};
/// psi = lambda (1 - mu^(xi))
struct CompoundPoisson {
    double lambda = 1.0;
    JumpLaw law;
};
/// psi = outer(inner(xi)); inner must be real valued.
struct Composed {
    BernsteinSpec outer;
    SymbolPtr inner;
};
struct Scaled {
    double factor = 1.0;
    SymbolPtr base;
};
/// psi = (1 + base)^{s/2}
struct Shifted {
    double s = 1.0;
    SymbolPtr base;
};
/// Full Lévy–Khintchine evaluation of a quadruple.
struct Quadruple {
    LevyQuadruple q;
};
} // namespace sym

using SymbolNode = std::variant<sym::Quadratic, sym::DriftQuadratic, sym::Stable, sym::Poisson, sym::CompoundPoisson,
                                sym::Composed, sym::Scaled, sym::Shifted, sym::Quadruple>;

/// Immutable, cheaply copyable symbol description.
class SymbolSpec {
public:
    SymbolSpec(SymbolNode node, int dim);

    static SymbolSpec quadratic(Eigen::MatrixXd Q);
    static SymbolSpec drift_quadratic(Eigen::VectorXd b, Eigen::MatrixXd Q);
    static SymbolSpec stable(double p, double scale = 1.0, int dim = 1);
    static SymbolSpec poisson(double lambda, int dim = 1);
    static SymbolSpec compound_poisson(double lambda, JumpLaw law, int dim = 1);
    static SymbolSpec scaled(double factor, const SymbolSpec& base);
    static SymbolSpec shifted(double s, const SymbolSpec& base);
    static SymbolSpec from_quadruple(LevyQuadruple q);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] const SymbolNode& node() const noexcept { return node_; }

private:
    SymbolNode node_;
    int dim_;
};

// ---------------------------------------------------------------------------
// Operations

/// psi(xi). Throws DimensionMismatch or UnsupportedMeasure.
[[nodiscard]] Complex eval_symbol(const SymbolSpec& spec, std::span<const double> xi);

/// exp(-t psi(xi)), t >= 0.
[[nodiscard]] Complex characteristic_function(const SymbolSpec& spec, std::span<const double> xi, double t);

/// outer o inner. Throws NotRealValued when inner has an imaginary part on the probe grid.
[[nodiscard]] SymbolSpec compose_symbols(const BernsteinSpec& outer, const SymbolSpec& inner);

/// sup over the grid of |psi(xi)| / (1 + |xi|^2). Throws EmptyGrid.
[[nodiscard]] double growth_bound_constant(const SymbolSpec& spec, std::span<const Point> probe_grid);

/// psi(0), i.e. the killing constant a of the quadruple.
[[nodiscard]] double killing_constant(const SymbolSpec& spec);

/// The named generator examples: bm_drift, poisson, compound_poisson, full_triple, alpha_stable.
[[nodiscard]] std::vector<std::pair<std::string, SymbolSpec>> generator_symbol_table();

/// Looks up a name from generator_symbol_table(); nullptr-free, throws InvalidArgument.
[[nodiscard]] SymbolSpec named_symbol(const std::string& name);

/// Radial probe points along the axes and diagonals of R^d, magnitudes in
/// [r_min, r_max] on a geometric ladder of `count` values, both signs.
[[nodiscard]] std::vector<Point> radial_probe_grid(int dim, double r_min, double r_max, int count);

/// Stable-density part of the Lévy–Khintchine integral in d = 1:
/// 2 k int_0^inf (1 - cos(xi y)) y^{-1-p} dy evaluated by quadrature, split at y = 1.
[[nodiscard]] double stable_density_integral(double p, double k, double xi);

} // namespace levyflow::levy
