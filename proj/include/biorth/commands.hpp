#ifndef BIORTH_COMMANDS_HPP
#define BIORTH_COMMANDS_HPP

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "biorth.hpp"
#include "error.hpp"
#include "families.hpp"
#include "io.hpp"
#include "regress.hpp"
#include "scenarios.hpp"

namespace biorth::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kMalformedInput = 2,
    kDomainMismatch = 3,
    kNumericFailure = 4,
};

inline constexpr unsigned kMaxFitOrder = 64;
inline constexpr unsigned kMaxTableOrder = 20;

struct FitRequest {
    std::string family;
    Rational b = 1;
    unsigned k = 0;
    std::optional<unsigned> removals;
    std::optional<double> target_error; // stop removing once the sample L2 error would exceed this
    std::filesystem::path input;
    std::filesystem::path out_dir;
};

namespace detail {

inline int exit_code_for(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::MalformedInput:
    case ErrorCode::NonUniformGrid:
    case ErrorCode::EvenPanelParity: return kMalformedInput;
    case ErrorCode::UnsupportedSpace: return kDomainMismatch;
    case ErrorCode::InvalidArgument:
    case ErrorCode::IndexOutOfRange: return kUsage;
    default: return kNumericFailure;
    }
}

// Runs `body`, mapping library errors to exit codes with a message on err.
inline int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

inline std::filesystem::path prepare_out_dir(const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    return dir;
}

// Columns named in `header`, one row per x in an evenly spaced grid.
inline void write_curves_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                             const std::vector<RealFunction>& columns, double lo, double hi, std::size_t n_points)
{
    std::ofstream out(path);
    out << "x";
    for (const auto& h : header) out << ',' << h;
    out << '\n';
    for (std::size_t t = 0; t < n_points; ++t) {
        const double x = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(n_points - 1);
        out << format_double(x);
        for (const auto& f : columns) out << ',' << format_double(f(x));
        out << '\n';
    }
}

inline RealFunction evaluator(const FitModel& m)
{
    return [&m](double x) { return m.eval(x); };
}

} // namespace detail

/// Fits sampled data and writes model.json and residuals.csv into out_dir.
inline int cmd_fit(const FitRequest& req, std::ostream& out, std::ostream& err)
{
    return detail::guarded(err, [&]() -> int {
        if (req.k > kMaxFitOrder) {
            err << "error: k must be at most " << kMaxFitOrder << '\n';
            return kUsage;
        }
        const unsigned removals = req.removals.value_or(0);
        if (removals >= req.k + 1) {
            err << "error: removals must be below k+1 = " << req.k + 1 << '\n';
            return kUsage;
        }
        const FamilySpec fam = family_from_name(req.family, req.b);
        const SpaceSpec space = fam.space();
        const SampleSet samples = read_samples_csv(req.input);
        for (std::size_t t = 0; t < samples.size(); ++t) {
            if (!space.contains(samples.xs[t])) {
                err << "error: " << req.input.string() << ": x = " << format_double(samples.xs[t])
                    << " (row " << t + 2 << ") lies outside the " << fam.name() << " interval\n";
                return kDomainMismatch;
            }
        }
        const MomentVector mu = moments_from_samples(samples, space, req.k);

        FitModel model = fit(fam, req.k, mu, removals);
        if (req.target_error) {
            const double base = l2_error(fit(fam, req.k, mu, 0), samples);
            model = fit_to_error(fam, req.k, mu, base, *req.target_error);
        }
        model.diagnostics.l2_error = l2_error(model, samples);
        model.diagnostics.max_abs_error = max_abs_error(model, samples);
        model.diagnostics.bic = bic_score(model, samples);

        const auto dir = detail::prepare_out_dir(req.out_dir);
        detail::write_json(dir / "model.json", model_to_json(model));
        write_residuals_csv(dir / "residuals.csv", model, samples);
        out << fam.name() << " k=" << req.k << ": " << model.n_params() << " terms, l2_error "
            << format_double(model.diagnostics.l2_error) << ", bic " << format_double(model.diagnostics.bic)
            << '\n';
        return kOk;
    });
}

// ------------------------------------------------------------ reports

inline nlohmann::json chirp_report_json(const scenarios::ChirpReport& r)
{
    nlohmann::json j;
    j["example"] = 1;
    j["seed"] = r.seed;
    j["setup"] = {{"n_points", r.setup.n_points},
                  {"noise_variance", r.setup.noise_sigma * r.setup.noise_sigma},
                  {"order", r.setup.order},
                  {"removals", r.setup.removals},
                  {"reduced_order", r.setup.reduced_order}};
    j["removed"] = r.removed();
    j["l2_error"] = {{"full", r.err_full}, {"pruned", r.err_pruned}, {"reduced", r.err_reduced}};
    j["bic"] = {{"full", r.bic_full}, {"pruned", r.bic_pruned}, {"reduced", r.bic_reduced}};
    j["bic_log10"] = {{"full", r.bic10_full}, {"pruned", r.bic10_pruned}, {"reduced", r.bic10_reduced}};
    j["bic_increase"] = {{"pruned", r.bic_increase_pruned()}, {"reduced", r.bic_increase_reduced()}};
    j["reference_values"] = {{"l2_error_full", 4.55e-2},
                             {"removed", {1, 4, 17}},
                             {"bic_increase_pruned", 0.0345},
                             {"bic_increase_reduced", 0.4530}};
    j["models"] = {{"full", model_to_json(r.full)},
                   {"pruned", model_to_json(r.pruned)},
                   {"reduced", model_to_json(r.reduced)}};
    return j;
}

inline nlohmann::json analytic_report_json(const scenarios::AnalyticReport& r)
{
    nlohmann::json j;
    j["example"] = 2;
    j["window"] = {0.0, scenarios::kAnalyticWindow};
    auto cases = nlohmann::json::array();
    for (const auto& c : r.cases) {
        cases.push_back({{"target", c.target},
                         {"family", c.family.name()},
                         {"k", c.order},
                         {"max_error", c.max_error},
                         {"reference_max_error", c.reported},
                         {"relative_deviation", (c.max_error - c.reported) / c.reported},
                         {"model", model_to_json(c.model)}});
    }
    j["cases"] = cases;
    return j;
}

inline nlohmann::json high_order_report_json(const scenarios::HighOrderReport& r)
{
    auto one = [](const scenarios::HighOrderCase& c) {
        return nlohmann::json{{"family", c.family.name()},
                              {"l2_error", c.l2_error},
                              {"l2_error_unweighted", c.l2_error_unweighted},
                              {"mean_abs_error", c.mean_abs_error},
                              {"max_abs_error", c.max_abs_error},
                              {"model", model_to_json(c.model)}};
    };
    nlohmann::json j;
    j["example"] = 3;
    j["k"] = r.order;
    j["legendre"] = one(r.legendre);
    j["chebyshev"] = one(r.chebyshev);
    j["baseline"] = one(r.baseline);
    j["baseline"]["condition_estimate"] = r.condition;
    j["baseline"]["determinant"] = r.determinant;
    j["mean_error_ratio"] = r.mean_error_ratio();
    return j;
}

inline constexpr std::size_t kCurvePoints = 1001;

inline int example_chirp(std::uint64_t seed, const std::filesystem::path& dir, std::ostream& out)
{
    const auto r = scenarios::run_chirp(seed);
    write_samples_csv(dir / "samples.csv", r.samples);
    detail::write_curves_csv(dir / "curves.csv", {"truth", "full", "pruned", "reduced"},
                             {scenarios::chirp, detail::evaluator(r.full), detail::evaluator(r.pruned),
                              detail::evaluator(r.reduced)},
                             0.0, 1.0, kCurvePoints);
    detail::write_json(dir / "report.json", chirp_report_json(r));

    out << "chirp, seed " << seed << '\n';
    out << "  k=17 full     l2 " << format_double(r.err_full) << "  bic " << format_double(r.bic_full) << '\n';
    out << "  pruned (-";
    for (unsigned e : r.removed()) out << ' ' << e;
    out << ")  l2 " << format_double(r.err_pruned) << "  bic " << format_double(r.bic_pruned) << "  ("
        << format_double(100 * r.bic_increase_pruned()) << "%)\n";
    out << "  k=14 reduced  l2 " << format_double(r.err_reduced) << "  bic " << format_double(r.bic_reduced)
        << "  (" << format_double(100 * r.bic_increase_reduced()) << "%)\n";
    return kOk;
}

inline int example_analytic(const std::filesystem::path& dir, std::ostream& out)
{
    const auto r = scenarios::run_analytic();
    auto model_of = [&](const std::string& target, Family fam) -> const FitModel& {
        for (const auto& c : r.cases)
            if (c.target == target && c.family.family() == fam) return c.model;
        throw Error(ErrorCode::InvalidArgument, "missing case " + target);
    };
    for (const std::string target : {"expdecay", "gamma"}) {
        const RealFunction truth =
            target == "expdecay" ? RealFunction(scenarios::expdecay) : RealFunction(scenarios::gamma_density);
        const FitModel& lag = model_of(target, Family::Laguerre);
        const FitModel& leg = model_of(target, Family::LegendreShifted);
        detail::write_curves_csv(
            dir / (target + ".csv"), {"truth", "laguerre", "legendre0b", "laguerre_error", "legendre0b_error"},
            {truth, detail::evaluator(lag), detail::evaluator(leg),
             [&](double x) { return std::abs(truth(x) - lag.eval(x)); },
             [&](double x) { return std::abs(truth(x) - leg.eval(x)); }},
            0.0, scenarios::kAnalyticWindow, kCurvePoints);
    }
    detail::write_json(dir / "report.json", analytic_report_json(r));

    out << "analytic moments, max error on [0, 10]\n";
    for (const auto& c : r.cases)
        out << "  " << c.target << "  " << c.family.name() << " k=" << c.order << "  "
            << format_double(c.max_error) << "  (reference " << format_double(c.reported) << ")\n";
    return kOk;
}

inline int example_high_order(const std::filesystem::path& dir, std::ostream& out)
{
    const auto r = scenarios::run_high_order();
    detail::write_curves_csv(dir / "curves.csv", {"truth", "legendre", "chebyshev", "baseline"},
                             {scenarios::damped_sine, detail::evaluator(r.legendre.model),
                              detail::evaluator(r.chebyshev.model), detail::evaluator(r.baseline.model)},
                             -1.0, 1.0, kCurvePoints);
    detail::write_json(dir / "report.json", high_order_report_json(r));

    out << "degree " << r.order << " on [-1, 1]\n";
    for (const auto* c : {&r.legendre, &r.chebyshev, &r.baseline})
        out << "  " << (c == &r.baseline ? std::string("baseline") : c->family.name()) << "  l2 "
            << format_double(c->l2_error) << "  mean " << format_double(c->mean_abs_error) << "  max "
            << format_double(c->max_abs_error) << '\n';
    out << "  condition estimate " << format_double(r.condition) << ", determinant "
        << format_double(r.determinant) << ", mean error ratio " << format_double(r.mean_error_ratio()) << '\n';
    return kOk;
}

/// Runs one of the three worked scenarios and writes report.json plus CSV
/// tables into out_dir.
inline int cmd_example(unsigned n, std::uint64_t seed, const std::filesystem::path& out_dir, std::ostream& out,
                       std::ostream& err)
{
    if (n < 1 || n > 3) {
        err << "error: example must be 1, 2 or 3\n";
        return kUsage;
    }
    return detail::guarded(err, [&]() -> int {
        const auto dir = detail::prepare_out_dir(out_dir);
        switch (n) {
        case 1: return example_chirp(seed, dir, out);
        case 2: return example_analytic(dir, out);
        default: return example_high_order(dir, out);
        }
    });
}

/// Prints every beta_n^k of the family with exact rational coefficients.
inline int cmd_tables(const std::string& family, const Rational& b, unsigned k, std::ostream& out, std::ostream& err)
{
    if (k > kMaxTableOrder) {
        err << "error: k must be at most " << kMaxTableOrder << " for exact tables\n";
        return kUsage;
    }
    return detail::guarded(err, [&]() -> int {
        const BiorthSet s = build(family_from_name(family, b), k);
        for (unsigned n : s.active()) out << "β_" << n << ": " << s.beta(n).to_string() << '\n';
        return kOk;
    });
}

} // namespace biorth::cli

#endif // BIORTH_COMMANDS_HPP
