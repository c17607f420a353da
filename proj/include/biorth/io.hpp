#ifndef BIORTH_IO_HPP
#define BIORTH_IO_HPP

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "families.hpp"
#include "model.hpp"
#include "regress.hpp"

namespace biorth {

/// 17 significant digits: round-trips every double.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace detail

/// Reads a two-column CSV with header `x,y`. Throws MalformedInput naming
/// the file and line on any defect.
inline SampleSet read_samples_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedInput, path.string() + ": cannot open file");
    auto fail = [&](std::size_t line, const std::string& why) {
        return Error(ErrorCode::MalformedInput, path.string() + ":" + std::to_string(line) + ": " + why);
    };
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedInput, path.string() + ": file is empty");
    std::string_view header = detail::trim(line);
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    if (header != "x,y") throw fail(1, "expected header 'x,y'");
    SampleSet s;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view row = detail::trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw fail(number, "expected two comma-separated fields");
        const auto x = detail::parse_double(row.substr(0, comma));
        const auto y = detail::parse_double(row.substr(comma + 1));
        if (!x || !y) throw fail(number, "non-numeric field");
        s.xs.push_back(*x);
        s.ys.push_back(*y);
    }
    if (s.size() == 0) throw Error(ErrorCode::MalformedInput, path.string() + ": no data rows");
    return s;
}

inline void write_samples_csv(const std::filesystem::path& path, const SampleSet& s)
{
    std::ofstream out(path);
    out << "x,y\n";
    for (std::size_t t = 0; t < s.size(); ++t) out << format_double(s.xs[t]) << ',' << format_double(s.ys[t]) << '\n';
}

/// x, y, fit, abs_error per sample.
inline void write_residuals_csv(const std::filesystem::path& path, const FitModel& model, const SampleSet& s)
{
    std::ofstream out(path);
    out << "x,y,fit,abs_error\n";
    for (std::size_t t = 0; t < s.size(); ++t) {
        const double fit = model.eval(s.xs[t]);
        out << format_double(s.xs[t]) << ',' << format_double(s.ys[t]) << ',' << format_double(fit) << ','
            << format_double(std::abs(s.ys[t] - fit)) << '\n';
    }
}

inline nlohmann::json model_to_json(const FitModel& model)
{
    nlohmann::json j;
    j["family"] = model.family.name();
    j["params"] = nlohmann::json::object();
    if (model.family.family() == Family::LegendreShifted) j["params"]["b"] = to_string(model.family.b());
    j["exponents"] = model.exponents;
    auto coeffs = nlohmann::json::array();
    for (double c : model.coeffs) coeffs.push_back(format_double(c));
    j["coeffs"] = coeffs;
    auto exact = nlohmann::json::array();
    for (std::size_t i = 0; i < model.coeffs.size(); ++i) {
        if (model.coeffs_exact)
            exact.push_back(to_string((*model.coeffs_exact)[i]));
        else
            exact.push_back(nullptr);
    }
    j["coeffs_exact"] = exact;
    j["diagnostics"] = {{"l2_error", model.diagnostics.l2_error},
                        {"max_abs_error", model.diagnostics.max_abs_error},
                        {"bic", model.diagnostics.bic},
                        {"n_params", model.diagnostics.n_params}};
    if (!model.removals.empty()) {
        auto removed = nlohmann::json::array();
        for (const auto& step : model.removals) removed.push_back({{"exponent", step.exponent}, {"score", step.score}});
        j["removed"] = removed;
    }
    return j;
}

inline FitModel model_from_json(const nlohmann::json& j)
{
    try {
        Rational b = 1;
        if (j.at("params").contains("b")) b = parse_rational(j["params"]["b"].get<std::string>());
        FitModel model{{}, {}, std::nullopt, family_from_name(j.at("family").get<std::string>(), b), {}, {}};
        model.exponents = j.at("exponents").get<std::vector<unsigned>>();
        for (const auto& c : j.at("coeffs")) {
            const auto v = detail::parse_double(c.get<std::string>());
            if (!v) throw Error(ErrorCode::MalformedInput, "bad coefficient string");
            model.coeffs.push_back(*v);
        }
        if (model.coeffs.size() != model.exponents.size())
            throw Error(ErrorCode::MalformedInput, "exponents and coeffs differ in length");
        const auto& exact = j.at("coeffs_exact");
        if (!exact.empty() && !exact.front().is_null()) {
            std::vector<Rational> values;
            for (const auto& c : exact) values.push_back(parse_rational(c.get<std::string>()));
            model.coeffs_exact = std::move(values);
        }
        const auto& d = j.at("diagnostics");
        // Non-finite values are written as null; only the BIC can be one (-inf).
        auto number = [](const nlohmann::json& v) {
            return v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>();
        };
        model.diagnostics = {number(d.at("l2_error")), number(d.at("max_abs_error")), number(d.at("bic")),
                             d.at("n_params").get<unsigned>()};
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("model json: ") + e.what());
    }
}

inline FitModel read_model_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedInput, path.string() + ": cannot open file");
    try {
        return model_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
    }
}

} // namespace biorth

#endif // BIORTH_IO_HPP
