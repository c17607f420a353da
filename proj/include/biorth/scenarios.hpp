#ifndef BIORTH_SCENARIOS_HPP
#define BIORTH_SCENARIOS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "baseline.hpp"
#include "biorth.hpp"
#include "families.hpp"
#include "regress.hpp"

// End-to-end demonstrations: noisy chirp regression with greedy pruning,
// analytic-moment fits of exponential decay and the Gamma density, and a
// degree-36 approximation compared against the normal equations.

namespace biorth::scenarios {

inline constexpr std::uint64_t kDefaultSeed = 42;

inline double chirp(double x) { return std::cos(7.0 * std::numbers::pi * x * x); }
inline double expdecay(double x) { return std::exp(-x); }
inline double gamma_density(double x) { return x * std::exp(-x); }
inline double damped_sine(double x) { return (1.0 - x * x) * std::exp(-x) * std::sin(8.0 * std::numbers::pi * x); }

// ---------------------------------------------------------------- chirp

struct ChirpSetup {
    std::size_t n_points = 501;
    double noise_sigma = 0.1; // variance 0.01
    unsigned order = 17;
    unsigned removals = 3;
    unsigned reduced_order = 14;
};

struct ChirpReport {
    std::uint64_t seed;
    ChirpSetup setup;
    SampleSet samples;
    FitModel full;
    FitModel pruned;
    FitModel reduced;
    // L2 error on [0, 1] against the noiseless chirp.
    double err_full;
    double err_pruned;
    double err_reduced;
    double bic_full;
    double bic_pruned;
    double bic_reduced;
    double bic10_full;
    double bic10_pruned;
    double bic10_reduced;

    /// (BIC - BIC_full) / |BIC_full|.
    [[nodiscard]] double bic_increase_pruned() const { return (bic_pruned - bic_full) / std::abs(bic_full); }
    [[nodiscard]] double bic_increase_reduced() const { return (bic_reduced - bic_full) / std::abs(bic_full); }

    [[nodiscard]] std::vector<unsigned> removed() const
    {
        std::vector<unsigned> out;
        for (const auto& step : pruned.removals) out.push_back(step.exponent);
        return out;
    }
};

/// x_t = t / (n - 1) on [0, 1], y_t = chirp(x_t) + N(0, sigma^2) from a
/// mt19937_64 seeded with `seed`.
inline SampleSet noisy_chirp(std::uint64_t seed, std::size_t n_points = 501, double sigma = 0.1)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    SampleSet s;
    const double h = 1.0 / static_cast<double>(n_points - 1);
    for (std::size_t t = 0; t < n_points; ++t) {
        const double x = h * static_cast<double>(t);
        s.xs.push_back(x);
        s.ys.push_back(chirp(x) + noise(rng));
    }
    return s;
}

inline ChirpReport run_chirp(std::uint64_t seed = kDefaultSeed, const ChirpSetup& setup = {})
{
    const FamilySpec fam = FamilySpec::legendre_shifted(1);
    const SpaceSpec space = fam.space();
    SampleSet samples = noisy_chirp(seed, setup.n_points, setup.noise_sigma);
    const MomentVector mu = moments_from_samples(samples, space, setup.order);

    auto finish = [&](FitModel m) {
        m.diagnostics.l2_error = l2_error(m, chirp, space);
        m.diagnostics.max_abs_error = max_abs_error(m, chirp, 0.0, 1.0);
        m.diagnostics.bic = bic_score(m, samples);
        return m;
    };
    FitModel full = finish(fit(fam, setup.order, mu, 0));
    FitModel pruned = finish(fit(fam, setup.order, mu, setup.removals));
    FitModel reduced = finish(fit(fam, setup.reduced_order, mu, 0));

    ChirpReport r{seed,
                  setup,
                  std::move(samples),
                  full,
                  pruned,
                  reduced,
                  full.diagnostics.l2_error,
                  pruned.diagnostics.l2_error,
                  reduced.diagnostics.l2_error,
                  full.diagnostics.bic,
                  pruned.diagnostics.bic,
                  reduced.diagnostics.bic,
                  0,
                  0,
                  0};
    r.bic10_full = bic_score(r.full, r.samples, LogBase::Ten);
    r.bic10_pruned = bic_score(r.pruned, r.samples, LogBase::Ten);
    r.bic10_reduced = bic_score(r.reduced, r.samples, LogBase::Ten);
    return r;
}

// ---------------------------------------------------- analytic moments

struct AnalyticCase {
    std::string target; // "expdecay" or "gamma"
    FamilySpec family;
    unsigned order;
    FitModel model;
    double max_error; // on [0, 10]
    double reported;  // published value
};

struct AnalyticReport {
    std::vector<AnalyticCase> cases;
};

inline constexpr double kAnalyticWindow = 10.0;

inline AnalyticReport run_analytic()
{
    AnalyticReport report;
    auto add = [&](const std::string& target, const FamilySpec& fam, unsigned k, double reported) {
        const SpaceSpec space = fam.space();
        const bool decay = target == "expdecay";
        const MomentVector mu = decay ? moments_expdecay(1.0, space, k) : moments_gamma(space, k);
        FitModel model = fit(fam, k, mu, 0);
        const RealFunction f = decay ? RealFunction(expdecay) : RealFunction(gamma_density);
        model.diagnostics.max_abs_error = max_abs_error(model, f, 0.0, kAnalyticWindow);
        model.diagnostics.l2_error = l2_error(model, f, space);
        report.cases.push_back({target, fam, k, model, model.diagnostics.max_abs_error, reported});
    };
    add("expdecay", FamilySpec::laguerre(), 14, 2.62e-4);
    add("expdecay", FamilySpec::legendre_shifted(10), 9, 2.20e-4);
    add("gamma", FamilySpec::laguerre(), 17, 3.90e-4);
    add("gamma", FamilySpec::legendre_shifted(10), 11, 8.52e-4);
    return report;
}

/// Exact coefficients of the Laguerre fit of exp(-x) (alpha = 1), whose
/// moments i!/2^(i+1) are rational.
inline FitModel exact_laguerre_expdecay(unsigned k)
{
    const FamilySpec fam = FamilySpec::laguerre();
    ExactMomentVector mu{{}, fam.space()};
    for (unsigned i = 0; i <= k; ++i) mu.mu.emplace_back(factorial(i), BigInt(1) << (i + 1));
    return project_exact(build(fam, k), mu);
}

// ------------------------------------------------------- degree 36

struct HighOrderCase {
    FamilySpec family;
    FitModel model;
    double l2_error;            // in the family's weighted space
    double l2_error_unweighted; // on [-1, 1]
    double mean_abs_error;
    double max_abs_error;
};

struct HighOrderReport {
    unsigned order;
    HighOrderCase legendre;
    HighOrderCase chebyshev;
    HighOrderCase baseline;
    double condition;
    double determinant;

    [[nodiscard]] double mean_error_ratio() const { return baseline.mean_abs_error / legendre.mean_abs_error; }
};

inline constexpr std::size_t kMeanErrorPoints = 2001;

inline double mean_abs_error(const FitModel& model, const RealFunction& f, double lo, double hi,
                             std::size_t n_points = kMeanErrorPoints)
{
    CompensatedSum acc;
    for (std::size_t t = 0; t < n_points; ++t) {
        const double x = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(n_points - 1);
        acc.add(std::abs(f(x) - model.eval(x)));
    }
    return acc.value() / static_cast<double>(n_points);
}

inline HighOrderReport run_high_order(unsigned k = 36)
{
    auto summarise = [&](const FamilySpec& fam, FitModel model) {
        const SpaceSpec space = fam.space();
        HighOrderCase c{fam,
                        model,
                        l2_error(model, damped_sine, space),
                        l2_error_unweighted(model, damped_sine, -1.0, 1.0),
                        mean_abs_error(model, damped_sine, -1.0, 1.0),
                        max_abs_error(model, damped_sine, -1.0, 1.0)};
        c.model.diagnostics.l2_error = c.l2_error;
        c.model.diagnostics.max_abs_error = c.max_abs_error;
        return c;
    };
    const FamilySpec leg = FamilySpec::legendre();
    const FamilySpec cheb = FamilySpec::chebyshev();
    const MomentVector mu_leg = moments_from_function(damped_sine, leg.space(), k);
    const MomentVector mu_cheb = moments_from_function(damped_sine, cheb.space(), k);
    const HankelGram g = gram(leg.space(), k);

    return {k,
            summarise(leg, fit(leg, k, mu_leg, 0)),
            summarise(cheb, fit(cheb, k, mu_cheb, 0)),
            summarise(leg, baseline_fit(leg, g, mu_leg)),
            condition_estimate(g),
            determinant(g)};
}

} // namespace biorth::scenarios

#endif // BIORTH_SCENARIOS_HPP
