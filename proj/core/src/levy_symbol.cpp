#include "levyflow/levy_symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levyflow/errors.hpp"
#include "levyflow/frac_constant.hpp"

namespace levyflow::levy {

namespace {

constexpr double kPsdTolerance = -1e-12;
constexpr double kRealTolerance = 1e-12;
constexpr double kQuadratureTolerance = 1e-8;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double quadratic_form(const Eigen::MatrixXd& Q, std::span<const double> xi) {
    const Eigen::Map<const Eigen::VectorXd> v(xi.data(), static_cast<Eigen::Index>(xi.size()));
    return 0.5 * v.dot(Q * v);
}

void check_psd(const Eigen::MatrixXd& Q, int d) {
    require(Q.rows() == d && Q.cols() == d, ErrorCode::DimensionMismatch, "diffusion matrix must be d x d");
    require((Q - Q.transpose()).cwiseAbs().maxCoeff() == 0.0, ErrorCode::InvalidArgument, "diffusion matrix must be symmetric");
    if (d == 0) return;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= kPsdTolerance, ErrorCode::InvalidArgument,
            "diffusion matrix must be positive semidefinite");
}

void check_points(const std::vector<Point>& points, std::size_t nweights, int d, bool allow_origin) {
    require(points.size() == nweights, ErrorCode::InvalidArgument, "atom points and weights differ in length");
    for (const auto& pt : points) {
        require(static_cast<int>(pt.size()) == d, ErrorCode::DimensionMismatch, "atom point has wrong dimension");
        if (!allow_origin) require(norm(pt) > 0.0, ErrorCode::InvalidArgument, "Lévy measure has an atom at the origin");
    }
}

void check_law(const JumpLaw& law, int d) {
    std::visit(overloaded{
                   [&](const AtomLaw& a) {
                       check_points(a.points, a.probs.size(), d, true);
                       double total = 0.0;
                       for (double w : a.probs) {
                           require(w >= 0.0, ErrorCode::InvalidArgument, "jump probabilities must be nonnegative");
                           total += w;
                       }
                       require(std::abs(total - 1.0) < 1e-12, ErrorCode::InvalidArgument, "jump probabilities must sum to 1");
                   },
                   [&](const GaussianLaw& g) {
                       require(g.sigma >= 0.0, ErrorCode::InvalidArgument, "Gaussian jump sigma must be nonnegative");
                   },
               },
               law);
}

/// mu^(xi) = int e^{i<xi,y>} mu(dy)
Complex law_transform(const JumpLaw& law, std::span<const double> xi) {
    return std::visit(overloaded{
                          [&](const AtomLaw& a) {
                              Complex acc{0.0, 0.0};
                              for (std::size_t k = 0; k < a.points.size(); ++k)
                                  acc += a.probs[k] * std::polar(1.0, dot(xi, a.points[k]));
                              return acc;
                          },
                          [&](const GaussianLaw& g) {
                              return Complex{std::exp(-0.5 * g.sigma * g.sigma * dot(xi, xi)), 0.0};
                          },
                      },
                      law);
}

/// Compensator int <xi,y> 1_{|y|<1} mu(dy)
double law_small_jump_mean(const JumpLaw& law, std::span<const double> xi) {
    return std::visit(overloaded{
                          [&](const AtomLaw& a) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < a.points.size(); ++k)
                                  if (norm(a.points[k]) < 1.0) acc += a.probs[k] * dot(xi, a.points[k]);
                              return acc;
                          },
                          [](const GaussianLaw&) { return 0.0; }, // symmetric
                      },
                      law);
}

Complex measure_integral(const LevyMeasureSpec& nu, std::span<const double> xi) {
    const Complex i{0.0, 1.0};
    return std::visit(overloaded{
                          [](const ZeroMeasure&) { return Complex{0.0, 0.0}; },
                          [&](const AtomMeasure& m) {
                              Complex acc{0.0, 0.0};
                              for (std::size_t k = 0; k < m.points.size(); ++k) {
                                  const double phase = dot(xi, m.points[k]);
                                  Complex term = 1.0 - std::polar(1.0, phase);
                                  if (norm(m.points[k]) < 1.0) term += i * phase;
                                  acc += m.weights[k] * term;
                              }
                              return acc;
                          },
                          [&](const StableDensity& s) {
                              require(xi.size() == 1, ErrorCode::UnsupportedMeasure,
                                      "stable density quadrature is configured for d = 1 only");
                              return Complex{stable_density_integral(s.p, s.scale * frac_constant(1, s.p), xi[0]), 0.0};
                          },
                          [&](const CompoundPoissonMeasure& m) {
                              return m.intensity * (1.0 - law_transform(m.law, xi) + i * law_small_jump_mean(m.law, xi));
                          },
                      },
                      nu);
}

Complex eval_node(const SymbolSpec& spec, std::span<const double> xi);

Complex eval_ptr(const SymbolPtr& p, std::span<const double> xi) { return eval_node(*p, xi); }

Complex eval_node(const SymbolSpec& spec, std::span<const double> xi) {
    const Complex i{0.0, 1.0};
    return std::visit(
        overloaded{
            [&](const sym::Quadratic& q) { return Complex{quadratic_form(q.Q, xi), 0.0}; },
            [&](const sym::DriftQuadratic& q) {
                const Eigen::Map<const Eigen::VectorXd> v(xi.data(), static_cast<Eigen::Index>(xi.size()));
                return Complex{quadratic_form(q.Q, xi), -q.b.dot(v)};
            },
            [&](const sym::Stable& s) { return Complex{s.scale * std::pow(norm(xi), s.p), 0.0}; },
            [&](const sym::Poisson& p) { return p.lambda * (1.0 - std::polar(1.0, xi[0])); },
            [&](const sym::CompoundPoisson& c) { return c.lambda * (1.0 - law_transform(c.law, xi)); },
            [&](const sym::Composed& c) {
                const Complex inner = eval_ptr(c.inner, xi);
                require(std::abs(inner.imag()) <= kRealTolerance * std::max(1.0, std::abs(inner.real())),
                        ErrorCode::NotRealValued, "inner symbol of a composition must be real valued");
                return Complex{eval_bernstein(c.outer, std::max(0.0, inner.real())), 0.0};
            },
            [&](const sym::Scaled& s) { return s.factor * eval_ptr(s.base, xi); },
            [&](const sym::Shifted& s) { return std::pow(1.0 + eval_ptr(s.base, xi), 0.5 * s.s); },
            [&](const sym::Quadruple& q) {
                const Eigen::Map<const Eigen::VectorXd> v(xi.data(), static_cast<Eigen::Index>(xi.size()));
                return q.q.killing() - i * q.q.drift().dot(v) + quadratic_form(q.q.diffusion(), xi) +
                       measure_integral(q.q.measure(), xi);
            },
        },
        spec.node());
}

} // namespace

// ---------------------------------------------------------------------------

LevyQuadruple::LevyQuadruple(double killing, Eigen::VectorXd drift, Eigen::MatrixXd diffusion, LevyMeasureSpec measure)
    : killing_(killing), drift_(std::move(drift)), diffusion_(std::move(diffusion)), measure_(std::move(measure)) {
    require(killing_ >= 0.0, ErrorCode::InvalidArgument, "killing constant must be nonnegative");
    const int d = dim();
    check_psd(diffusion_, d);
    std::visit(overloaded{
                   [](const ZeroMeasure&) {},
                   [&](const AtomMeasure& m) {
                       check_points(m.points, m.weights.size(), d, false);
                       for (double w : m.weights)
                           require(w >= 0.0, ErrorCode::InvalidArgument, "atom weights must be nonnegative");
                   },
                   [&](const StableDensity& s) {
                       require(s.p > 0.0 && s.p < 2.0, ErrorCode::ExponentOutOfRange, "stable tail needs p in (0,2)");
                       require(s.scale >= 0.0, ErrorCode::InvalidArgument, "stable tail scale must be nonnegative");
                   },
                   [&](const CompoundPoissonMeasure& m) {
                       require(m.intensity >= 0.0, ErrorCode::InvalidArgument, "intensity must be nonnegative");
                       check_law(m.law, d);
                   },
               },
               measure_);
}

double eval_bernstein(const BernsteinSpec& f, double lambda) {
    return std::visit(overloaded{
                          [&](const PowerBernstein& p) { return std::pow(lambda, p.alpha); },
                          [&](const IdentityBernstein&) { return lambda; },
                          [&](const AffinePowerBernstein& p) { return p.c0 + p.c1 * std::pow(lambda, p.alpha); },
                      },
                      f);
}

SymbolSpec::SymbolSpec(SymbolNode node, int dim) : node_(std::move(node)), dim_(dim) {
    require(dim_ >= 1, ErrorCode::DimensionMismatch, "symbol dimension must be positive");
}

SymbolSpec SymbolSpec::quadratic(Eigen::MatrixXd Q) {
    const int d = static_cast<int>(Q.rows());
    check_psd(Q, d);
    return {sym::Quadratic{std::move(Q)}, d};
}

SymbolSpec SymbolSpec::drift_quadratic(Eigen::VectorXd b, Eigen::MatrixXd Q) {
    const int d = static_cast<int>(b.size());
    check_psd(Q, d);
    return {sym::DriftQuadratic{std::move(b), std::move(Q)}, d};
}

SymbolSpec SymbolSpec::stable(double p, double scale, int dim) {
    require(p > 0.0 && p <= 2.0, ErrorCode::ExponentOutOfRange, "stable spectral exponent must lie in (0,2]");
    require(scale >= 0.0, ErrorCode::InvalidArgument, "stable scale must be nonnegative");
    return {sym::Stable{p, scale}, dim};
}

SymbolSpec SymbolSpec::poisson(double lambda, int dim) {
    require(lambda >= 0.0, ErrorCode::InvalidArgument, "Poisson intensity must be nonnegative");
    return {sym::Poisson{lambda}, dim};
}

SymbolSpec SymbolSpec::compound_poisson(double lambda, JumpLaw law, int dim) {
    require(lambda >= 0.0, ErrorCode::InvalidArgument, "compound Poisson intensity must be nonnegative");
    check_law(law, dim);
    return {sym::CompoundPoisson{lambda, std::move(law)}, dim};
}

SymbolSpec SymbolSpec::scaled(double factor, const SymbolSpec& base) {
    require(factor >= 0.0, ErrorCode::InvalidArgument, "scale factor must be nonnegative");
    return {sym::Scaled{factor, std::make_shared<const SymbolSpec>(base)}, base.dim()};
}

SymbolSpec SymbolSpec::shifted(double s, const SymbolSpec& base) {
    require(s > 0.0, ErrorCode::InvalidArgument, "shift exponent s must be positive");
    return {sym::Shifted{s, std::make_shared<const SymbolSpec>(base)}, base.dim()};
}

SymbolSpec SymbolSpec::from_quadruple(LevyQuadruple q) {
    const int d = q.dim();
    return {sym::Quadruple{std::move(q)}, d};
}

Complex eval_symbol(const SymbolSpec& spec, std::span<const double> xi) {
    require(static_cast<int>(xi.size()) == spec.dim(), ErrorCode::DimensionMismatch,
            "xi has length " + std::to_string(xi.size()) + ", symbol dimension is " + std::to_string(spec.dim()));
    return eval_node(spec, xi);
}

Complex characteristic_function(const SymbolSpec& spec, std::span<const double> xi, double t) {
    require(t >= 0.0, ErrorCode::InvalidArgument, "time must be nonnegative");
    if (t == 0.0) {
        (void)eval_symbol(spec, xi); // still validates dimensions
        return {1.0, 0.0};
    }
    return std::exp(-t * eval_symbol(spec, xi));
}

SymbolSpec compose_symbols(const BernsteinSpec& outer, const SymbolSpec& inner) {
    std::visit(overloaded{
                   [](const PowerBernstein& p) {
                       require(p.alpha > 0.0 && p.alpha <= 1.0, ErrorCode::ExponentOutOfRange, "power must lie in (0,1]");
                   },
                   [](const IdentityBernstein&) {},
                   [](const AffinePowerBernstein& p) {
                       require(p.c0 >= 0.0 && p.c1 >= 0.0, ErrorCode::InvalidArgument, "affine coefficients must be nonnegative");
                       require(p.alpha > 0.0 && p.alpha <= 1.0, ErrorCode::ExponentOutOfRange, "power must lie in (0,1]");
                   },
               },
               outer);
    for (const auto& xi : radial_probe_grid(inner.dim(), 0.1, 10.0, 9)) {
        const Complex v = eval_symbol(inner, xi);
        require(std::abs(v.imag()) <= kRealTolerance * std::max(1.0, std::abs(v.real())), ErrorCode::NotRealValued,
                "inner symbol has a nonzero imaginary part on the probe grid");
        require(v.real() >= -kRealTolerance, ErrorCode::NotRealValued, "inner symbol is negative on the probe grid");
    }
    if (std::holds_alternative<IdentityBernstein>(outer)) return inner;
    return {sym::Composed{outer, std::make_shared<const SymbolSpec>(inner)}, inner.dim()};
}

double growth_bound_constant(const SymbolSpec& spec, std::span<const Point> probe_grid) {
    require(!probe_grid.empty(), ErrorCode::EmptyGrid, "probe grid is empty");
    double sup = 0.0;
    for (const auto& xi : probe_grid) {
        const double r2 = dot(xi, xi);
        sup = std::max(sup, std::abs(eval_symbol(spec, xi)) / (1.0 + r2));
    }
    return sup;
}

double killing_constant(const SymbolSpec& spec) {
    const Point zero(static_cast<std::size_t>(spec.dim()), 0.0);
    return eval_symbol(spec, zero).real();
}

std::vector<std::pair<std::string, SymbolSpec>> generator_symbol_table() {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    std::vector<std::pair<std::string, SymbolSpec>> table;
    table.emplace_back("bm_drift", SymbolSpec::drift_quadratic(VectorXd::Constant(1, 0.5), MatrixXd::Constant(1, 1, 1.0)));
    table.emplace_back("poisson", SymbolSpec::poisson(2.0));
    table.emplace_back("compound_poisson", SymbolSpec::compound_poisson(1.5, GaussianLaw{1.0}));
    table.emplace_back("full_triple",
                       SymbolSpec::from_quadruple(LevyQuadruple(
                           0.0, VectorXd::Constant(1, 0.25), MatrixXd::Constant(1, 1, 0.5),
                           AtomMeasure{{{-1.0}, {0.5}, {2.0}}, {0.5, 0.25, 0.25}})));
    table.emplace_back("alpha_stable", SymbolSpec::stable(1.5));
    return table;
}

SymbolSpec named_symbol(const std::string& name) {
    for (auto& [n, s] : generator_symbol_table())
        if (n == name) return s;
    if (name == "quadratic") return SymbolSpec::quadratic(Eigen::MatrixXd::Identity(1, 1));
    raise(ErrorCode::InvalidArgument, "unknown symbol name '" + name + "'");
}

std::vector<Point> radial_probe_grid(int dim, double r_min, double r_max, int count) {
    require(dim >= 1 && count >= 1 && r_min > 0.0 && r_max >= r_min, ErrorCode::InvalidArgument, "invalid probe grid request");
    std::vector<Point> directions;
    for (int k = 0; k < dim; ++k) {
        Point e(static_cast<std::size_t>(dim), 0.0);
        e[static_cast<std::size_t>(k)] = 1.0;
        directions.push_back(std::move(e));
    }
    if (dim > 1) directions.emplace_back(static_cast<std::size_t>(dim), 1.0 / std::sqrt(static_cast<double>(dim)));

    std::vector<Point> grid;
    const double ratio = count > 1 ? std::pow(r_max / r_min, 1.0 / (count - 1)) : 1.0;
    for (const auto& dir : directions) {
        double r = r_min;
        for (int k = 0; k < count; ++k, r *= ratio) {
            for (double sign : {1.0, -1.0}) {
                Point p(dir);
                for (double& c : p) c *= sign * r;
                grid.push_back(std::move(p));
            }
        }
    }
    return grid;
}

double stable_density_integral(double p, double k, double xi) {
    require(p > 0.0 && p < 2.0, ErrorCode::ExponentOutOfRange, "stable tail needs p in (0,2)");
    const double w = std::abs(xi);
    if (w == 0.0 || k == 0.0) return 0.0;

    // |y| <= 1: with y = u^m, m = 1/(2-p), the integrand 2 sin^2(w y/2) y^{-1-p} dy
    // becomes 2 m (sin(w y/2) / y)^2 du, bounded and smooth down to u = 0.
    static thread_local boost::math::quadrature::tanh_sinh<double> inner_rule;
    const double m = 1.0 / (2.0 - p);
    const double inner = inner_rule.integrate(
        [&](double u) {
            const double y = std::pow(u, m);
            const double r = y > 0.0 ? std::sin(0.5 * w * y) / y : 0.5 * w;
            return 2.0 * m * r * r;
        },
        0.0, 1.0, kQuadratureTolerance);

    // |y| >= 1: int_1^inf y^{-1-p} dy = 1/p, minus the oscillatory part
    // int_0^inf cos(w (t+1)) (1+t)^{-1-p} dt handled by Ooura's double-exponential Fourier rules.
    static thread_local boost::math::quadrature::ooura_fourier_cos<double> cos_rule(kQuadratureTolerance);
    static thread_local boost::math::quadrature::ooura_fourier_sin<double> sin_rule(kQuadratureTolerance);
    const auto g = [p](double t) { return std::pow(1.0 + t, -1.0 - p); };
    const double c = cos_rule.integrate(g, w).first;
    const double s = sin_rule.integrate(g, w).first;
    const double outer = 1.0 / p - (std::cos(w) * c - std::sin(w) * s);

    return 2.0 * k * (inner + outer);
}

} // namespace levyflow::levy
