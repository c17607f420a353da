#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "biorth/commands.hpp"

int main(int argc, char** argv)
{
    using namespace biorth;

    CLI::App app{"Biorthogonal polynomial regression without matrix inversion"};
    app.require_subcommand(1);

    cli::FitRequest req;
    std::string fit_b = "1";
    std::optional<unsigned> removals;
    std::optional<double> max_error;
    auto* fit = app.add_subcommand("fit", "Fit x,y samples from a CSV file");
    fit->add_option("--family", req.family, "legendre0b, laguerre, legendre or chebyshev")->required();
    fit->add_option("--b", fit_b, "Right end of the interval for legendre0b (integer, p/q or decimal)");
    fit->add_option("--k", req.k, "Polynomial order")->required();
    auto* removals_opt = fit->add_option("--removals", removals, "Number of greedy term removals");
    fit->add_option("--max-error", max_error, "Remove terms while the predicted L2 error stays within this")
        ->excludes(removals_opt);
    fit->add_option("--input", req.input, "CSV with header x,y")->required();
    fit->add_option("--out", req.out_dir, "Output directory")->required();

    unsigned example_n = 0;
    std::uint64_t seed = scenarios::kDefaultSeed;
    std::string example_out;
    auto* example = app.add_subcommand("example", "Run a worked scenario");
    example->add_option("n", example_n, "1: chirp, 2: analytic moments, 3: degree 36")->required();
    example->add_option("--seed", seed, "Noise seed for scenario 1")->capture_default_str();
    example->add_option("--out", example_out, "Output directory")->required();

    std::string table_family;
    std::string table_b = "1";
    unsigned table_k = 0;
    auto* tables = app.add_subcommand("tables", "Print the exact biorthogonal polynomials");
    tables->add_option("--family", table_family)->required();
    tables->add_option("--b", table_b, "Right end of the interval for legendre0b");
    tables->add_option("--k", table_k)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kUsage;
    }

    auto parse_b = [](const std::string& text) -> std::optional<Rational> {
        try {
            return parse_rational(text);
        } catch (const std::exception& e) {
            std::cerr << "error: --b: " << e.what() << '\n';
            return std::nullopt;
        }
    };

    if (fit->parsed()) {
        const auto b = parse_b(fit_b);
        if (!b) return cli::kUsage;
        req.b = *b;
        req.removals = removals;
        req.target_error = max_error;
        return cli::cmd_fit(req, std::cout, std::cerr);
    }
    if (example->parsed()) return cli::cmd_example(example_n, seed, example_out, std::cout, std::cerr);

    const auto b = parse_b(table_b);
    if (!b) return cli::kUsage;
    return cli::cmd_tables(table_family, *b, table_k, std::cout, std::cerr);
}
