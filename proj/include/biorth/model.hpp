#ifndef BIORTH_MODEL_HPP
#define BIORTH_MODEL_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "compensated.hpp"
#include "families.hpp"
#include "rational.hpp"

namespace biorth {

struct FitDiagnostics {
    double l2_error = 0.0;
    double max_abs_error = 0.0;
    double bic = 0.0;
    unsigned n_params = 0;
};

/// One greedy downgrade step: the removed exponent and its score
/// |<f, beta_l>|^2 / ||beta_l||^2, the predicted increase of the squared
/// L2 error.
struct RemovalStep {
    unsigned exponent;
    double score;
};

/// f_k(x) = sum over exponents of coeffs[i] x^exponents[i].
struct FitModel {
    std::vector<unsigned> exponents;
    std::vector<double> coeffs;
    std::optional<std::vector<Rational>> coeffs_exact;
    FamilySpec family;
    FitDiagnostics diagnostics;
    std::vector<RemovalStep> removals;

    [[nodiscard]] unsigned n_params() const noexcept { return static_cast<unsigned>(exponents.size()); }

    /// Coefficients laid out densely by exponent.
    [[nodiscard]] std::vector<double> dense_coeffs() const
    {
        const unsigned top = exponents.empty() ? 0 : *std::max_element(exponents.begin(), exponents.end());
        std::vector<double> dense(exponents.empty() ? 0 : top + 1, 0.0);
        for (std::size_t i = 0; i < exponents.size(); ++i) dense[exponents[i]] = coeffs[i];
        return dense;
    }

    /// Coefficient of x^exponent, zero if absent.
    [[nodiscard]] double coeff(unsigned exponent) const
    {
        auto it = std::find(exponents.begin(), exponents.end(), exponent);
        return it == exponents.end() ? 0.0 : coeffs[static_cast<std::size_t>(it - exponents.begin())];
    }

    [[nodiscard]] double eval(double x) const
    {
        const auto dense = dense_coeffs();
        return compensated_horner(dense, x);
    }
};

} // namespace biorth

#endif // BIORTH_MODEL_HPP
