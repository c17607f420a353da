#ifndef BIORTH_REGRESS_HPP
#define BIORTH_REGRESS_HPP

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biorth.hpp"
#include "compensated.hpp"
#include "error.hpp"
#include "model.hpp"
#include "moments.hpp"

namespace biorth {

using RealFunction = std::function<double(double)>;

/// Sampled data (x_t, y_t) with strictly increasing x.
struct SampleSet {
    std::vector<double> xs;
    std::vector<double> ys;

    [[nodiscard]] std::size_t size() const noexcept { return xs.size(); }
};

/// Relative tolerance on grid spacing for Simpson integration.
inline constexpr double kUniformGridTolerance = 1e-9;

namespace detail {

// Composite Simpson weights for a uniform grid with an odd number of points.
inline std::vector<double> simpson_weights(std::span<const double> xs)
{
    const std::size_t n = xs.size();
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "Simpson integration needs at least 3 samples");
    if (n % 2 == 0)
        throw Error(ErrorCode::EvenPanelParity, std::to_string(n) + " samples give an odd number of panels");
    const double h = (xs.back() - xs.front()) / static_cast<double>(n - 1);
    if (!(h > 0)) throw Error(ErrorCode::NonUniformGrid, "sample abscissae must be strictly increasing");
    for (std::size_t t = 1; t < n; ++t) {
        const double step = xs[t] - xs[t - 1];
        if (std::abs(step - h) > kUniformGridTolerance * h)
            throw Error(ErrorCode::NonUniformGrid, "sample spacing deviates at index " + std::to_string(t));
    }
    std::vector<double> w(n, 2.0 * h / 3.0);
    for (std::size_t t = 1; t + 1 < n; t += 2) w[t] = 4.0 * h / 3.0;
    w.front() = w.back() = h / 3.0;
    return w;
}

// Composite Simpson of g over [a, b] with an even number of panels.
inline double simpson(const RealFunction& g, double a, double b, std::size_t panels)
{
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    CompensatedSum acc;
    acc.add(g(a));
    acc.add(g(b));
    for (std::size_t t = 1; t < panels; ++t) acc.add((t % 2 == 1 ? 4.0 : 2.0) * g(a + h * static_cast<double>(t)));
    return acc.value() * h / 3.0;
}

// Composite 20-point Gauss-Legendre over [a, b].
inline double gauss_panels(const RealFunction& g, double a, double b, std::size_t panels)
{
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double h = (b - a) / static_cast<double>(panels);
    CompensatedSum acc;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        acc.add(Rule::integrate(g, lo, p + 1 == panels ? b : lo + h));
    }
    return acc.value();
}

inline bool is_bounded_unit(const SpaceSpec& space)
{
    return space.bounded() && space.weight() == WeightKind::Unit;
}

} // namespace detail

/// mu_i by composite Simpson over [xs.front(), xs.back()] of x^i y.
inline MomentVector moments_from_samples(const SampleSet& s, const SpaceSpec& space, unsigned k)
{
    if (!detail::is_bounded_unit(space))
        throw Error(ErrorCode::UnsupportedSpace, "sample moments need a bounded interval with unit weight");
    if (s.xs.size() != s.ys.size()) throw Error(ErrorCode::InvalidArgument, "xs and ys differ in length");
    for (double x : s.xs)
        if (!space.contains(x)) throw Error(ErrorCode::InvalidArgument, "sample x=" + std::to_string(x) + " lies outside the interval");
    const auto w = detail::simpson_weights(s.xs);
    std::vector<double> mu(k + 1);
    std::vector<double> power(s.size(), 1.0);
    for (unsigned i = 0; i <= k; ++i) {
        CompensatedSum acc;
        for (std::size_t t = 0; t < s.size(); ++t) {
            acc.add_product(w[t] * power[t], s.ys[t]);
            power[t] *= s.xs[t];
        }
        mu[i] = acc.value();
    }
    return {std::move(mu), QuadratureSamples{s.size()}, space};
}

/// Closed-form moments of exp(-alpha x).
///   half line:  mu_i = i! / (alpha + 1)^(i + 1)
///   [0, b]:     mu_i = e^(-alpha b) sum_j (-1)^(i-j) i! b^j / (j! (-alpha)^(i-j+1)) + i! / alpha^(i+1)
inline MomentVector moments_expdecay(double alpha, const SpaceSpec& space, unsigned k)
{
    if (!(alpha > 0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    std::vector<double> mu(k + 1);
    if (space.weight() == WeightKind::ExpNeg) {
        double m = 1.0 / (alpha + 1.0);
        for (unsigned i = 0; i <= k; ++i) {
            if (i > 0) m *= static_cast<double>(i) / (alpha + 1.0);
            mu[i] = m;
        }
    } else if (detail::is_bounded_unit(space) && space.lo() == 0) {
        const auto a = static_cast<long double>(alpha);
        const auto b = static_cast<long double>(to_double(space.hi()));
        const long double decay = std::exp(-a * b);
        for (unsigned i = 0; i <= k; ++i) {
            long double sum = 0.0L;
            for (unsigned j = 0; j <= i; ++j) {
                // i! / j! as a running product
                long double ratio = 1.0L;
                for (unsigned t = j + 1; t <= i; ++t) ratio *= static_cast<long double>(t);
                const unsigned p = i - j + 1;
                const long double sign = ((i - j) % 2 == 0 ? 1.0L : -1.0L);
                sum += sign * ratio * std::pow(b, static_cast<long double>(j)) / std::pow(-a, static_cast<long double>(p));
            }
            long double fact = 1.0L;
            for (unsigned t = 2; t <= i; ++t) fact *= static_cast<long double>(t);
            mu[i] = static_cast<double>(decay * sum + fact / std::pow(a, static_cast<long double>(i + 1)));
        }
    } else {
        throw Error(ErrorCode::UnsupportedSpace, "no closed-form exponential moments for this space");
    }
    return {std::move(mu), AnalyticExpDecay{alpha}, space};
}

/// Closed-form moments of the Gamma density x exp(-x).
inline MomentVector moments_gamma(const SpaceSpec& space, unsigned k)
{
    std::vector<double> mu(k + 1);
    if (space.weight() == WeightKind::ExpNeg) {
        // (i+1)! / 2^(i+2)
        double m = 0.25;
        for (unsigned i = 0; i <= k; ++i) {
            if (i > 0) m *= static_cast<double>(i + 1) / 2.0;
            mu[i] = m;
        }
    } else if (detail::is_bounded_unit(space) && space.lo() == 0) {
        const MomentVector shifted = moments_expdecay(1.0, space, k + 1);
        for (unsigned i = 0; i <= k; ++i) mu[i] = shifted.mu[i + 1];
    } else {
        throw Error(ErrorCode::UnsupportedSpace, "no closed-form Gamma moments for this space");
    }
    return {std::move(mu), AnalyticGamma{}, space};
}

inline constexpr std::size_t kDefaultMomentPanels = 64;

/// mu_i by quadrature of a target function. Bounded spaces use composite
/// 20-point Gauss-Legendre (through x = cos(theta) for the Chebyshev weight);
/// the half line uses exp-sinh quadrature.
inline MomentVector moments_from_function(const RealFunction& f, const SpaceSpec& space, unsigned k,
                                          std::size_t panels = kDefaultMomentPanels)
{
    std::vector<double> mu(k + 1);
    for (unsigned i = 0; i <= k; ++i) {
        const double p = static_cast<double>(i);
        switch (space.weight()) {
        case WeightKind::Unit:
            mu[i] = detail::gauss_panels([&](double x) { return std::pow(x, p) * f(x); }, to_double(space.lo()),
                                         to_double(space.hi()), panels);
            break;
        case WeightKind::ChebyshevW:
            mu[i] = detail::gauss_panels(
                [&](double t) {
                    const double x = std::cos(t);
                    return std::pow(x, p) * f(x);
                },
                0.0, std::numbers::pi, panels);
            break;
        case WeightKind::ExpNeg: {
            boost::math::quadrature::exp_sinh<double> integrator;
            mu[i] = integrator.integrate([&](double x) {
                const double w = x > 0 ? std::exp(p * std::log(x) - x) : (p == 0 ? 1.0 : 0.0);
                return w == 0 ? 0.0 : w * f(x);
            });
            break;
        }
        }
    }
    return {std::move(mu), QuadratureFunction{panels}, space};
}

/// Builds the order-k set, applies `removals` sequential greedy downgrades
/// (each removing the least damaging exponent for the current set) and
/// projects from the final set. Diagnostics are left for the caller.
inline FitModel fit(const FamilySpec& fam, unsigned k, const MomentVector& m, unsigned removals = 0)
{
    if (removals >= k + 1)
        throw Error(ErrorCode::InvalidArgument, "cannot remove " + std::to_string(removals) + " of "
                                                    + std::to_string(k + 1) + " monomials");
    BiorthSet set = build(fam, k);
    std::vector<RemovalStep> steps;
    for (unsigned r = 0; r < removals; ++r) {
        const unsigned ell = select_removal(set, m);
        const double c = moment_inner(set, ell, m);
        steps.push_back({ell, c * c / set.norm_sq_float(ell)});
        set = downgrade(set, ell);
    }
    FitModel model = project(set, m);
    model.removals = std::move(steps);
    return model;
}

/// Greedy removals continue while the predicted L2 error stays at or below
/// `max_error`, starting from the error `base_error` of the full fit.
inline FitModel fit_to_error(const FamilySpec& fam, unsigned k, const MomentVector& m, double base_error,
                             double max_error)
{
    BiorthSet set = build(fam, k);
    std::vector<RemovalStep> steps;
    double err_sq = base_error * base_error;
    while (set.size() > 1) {
        const unsigned ell = select_removal(set, m);
        const double c = moment_inner(set, ell, m);
        const double score = c * c / set.norm_sq_float(ell);
        if (std::sqrt(err_sq + score) > max_error) break;
        err_sq += score;
        steps.push_back({ell, score});
        set = downgrade(set, ell);
    }
    FitModel model = project(set, m);
    model.removals = std::move(steps);
    return model;
}

inline constexpr std::size_t kErrorPanels = 10000;
inline constexpr double kHalfLineCutoff = 40.0;

/// sqrt of the integral of (f - f_k)^2 w over the space.
inline double l2_error(const FitModel& model, const RealFunction& reference, const SpaceSpec& space)
{
    const auto dense = model.dense_coeffs();
    auto diff = [&](double x) { return reference(x) - compensated_horner(dense, x); };
    double sq = 0.0;
    switch (space.weight()) {
    case WeightKind::Unit:
        sq = detail::simpson([&](double x) { return diff(x) * diff(x); }, to_double(space.lo()), to_double(space.hi()),
                             kErrorPanels);
        break;
    case WeightKind::ChebyshevW:
        sq = detail::simpson(
            [&](double t) {
                const double e = diff(std::cos(t));
                return e * e;
            },
            0.0, std::numbers::pi, kErrorPanels);
        break;
    case WeightKind::ExpNeg:
        sq = detail::gauss_panels(
            [&](double x) {
                const double e = diff(x);
                return e * e * std::exp(-x);
            },
            0.0, kHalfLineCutoff, 400);
        break;
    }
    return std::sqrt(std::max(sq, 0.0));
}

/// Unweighted L2 error over [lo, hi].
inline double l2_error_unweighted(const FitModel& model, const RealFunction& reference, double lo, double hi)
{
    const auto dense = model.dense_coeffs();
    const double sq = detail::simpson(
        [&](double x) {
            const double e = reference(x) - compensated_horner(dense, x);
            return e * e;
        },
        lo, hi, kErrorPanels);
    return std::sqrt(std::max(sq, 0.0));
}

/// L2 error against samples: Simpson over the sample grid.
inline double l2_error(const FitModel& model, const SampleSet& reference)
{
    const auto w = detail::simpson_weights(reference.xs);
    const auto dense = model.dense_coeffs();
    CompensatedSum acc;
    for (std::size_t t = 0; t < reference.size(); ++t) {
        const double e = reference.ys[t] - compensated_horner(dense, reference.xs[t]);
        acc.add(w[t] * e * e);
    }
    return std::sqrt(std::max(acc.value(), 0.0));
}

/// max |f - f_k| over a uniform grid of n_points on [lo, hi].
inline double max_abs_error(const FitModel& model, const RealFunction& reference, double lo, double hi,
                            std::size_t n_points = 20001)
{
    const auto dense = model.dense_coeffs();
    double worst = 0.0;
    for (std::size_t t = 0; t < n_points; ++t) {
        const double x = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(n_points - 1);
        worst = std::max(worst, std::abs(reference(x) - compensated_horner(dense, x)));
    }
    return worst;
}

inline double max_abs_error(const FitModel& model, const SampleSet& reference)
{
    double worst = 0.0;
    for (std::size_t t = 0; t < reference.size(); ++t)
        worst = std::max(worst, std::abs(reference.ys[t] - model.eval(reference.xs[t])));
    return worst;
}

/// Mean of the squared residuals y_t - f_k(x_t).
inline double residual_mse(const FitModel& model, const SampleSet& s)
{
    if (s.size() == 0) throw Error(ErrorCode::InvalidArgument, "BIC needs at least one sample");
    const auto dense = model.dense_coeffs();
    CompensatedSum acc;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const double r = s.ys[t] - compensated_horner(dense, s.xs[t]);
        acc.add(r * r);
    }
    return acc.value() / static_cast<double>(s.size());
}

enum class LogBase { Natural, Ten };

/// BIC = gamma log N + N log(MSE) with gamma = n_params. A zero residual
/// yields -infinity.
inline double bic_score(const FitModel& model, const SampleSet& s, LogBase base = LogBase::Natural)
{
    const double mse = residual_mse(model, s);
    const auto n = static_cast<double>(s.size());
    auto lg = [base](double v) { return base == LogBase::Natural ? std::log(v) : std::log10(v); };
    if (mse == 0.0) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(model.n_params()) * lg(n) + n * lg(mse);
}

} // namespace biorth

#endif // BIORTH_REGRESS_HPP
