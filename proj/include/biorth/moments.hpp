#ifndef BIORTH_MOMENTS_HPP
#define BIORTH_MOMENTS_HPP

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "poly.hpp"
#include "rational.hpp"

namespace biorth {

struct AnalyticExpDecay {
    double alpha;
};
struct AnalyticGamma {};
struct QuadratureSamples {
    std::size_t n_points;
};
struct QuadratureFunction {
    std::size_t n_panels;
};
struct ExactPolynomialMoments {};

using MomentProvenance =
    std::variant<AnalyticExpDecay, AnalyticGamma, QuadratureSamples, QuadratureFunction, ExactPolynomialMoments>;

/// Generalised moments mu_i = integral of x^i f(x) w(x) over the space,
/// for i = 0 .. mu.size() - 1.
struct MomentVector {
    std::vector<double> mu;
    MomentProvenance provenance;
    SpaceSpec space;

    [[nodiscard]] std::size_t order() const noexcept { return mu.empty() ? 0 : mu.size() - 1; }
};

/// Exact moments of a rational-coefficient target. Under the Chebyshev
/// weight each entry is the coefficient of pi, as with inner_monomial.
struct ExactMomentVector {
    std::vector<Rational> mu;
    SpaceSpec space;
};

/// Exact moments of a polynomial f, i = 0..k.
inline ExactMomentVector exact_moments(const SpaceSpec& space, const ExactPoly& f, unsigned k)
{
    if (f.scale() != ScaleTag::One) throw Error(ErrorCode::ScaleMismatch, "exact moments need an unscaled target");
    std::vector<Rational> mu(k + 1);
    for (unsigned i = 0; i <= k; ++i) mu[i] = inner_poly_scaled(space, ExactPoly::monomial(i), f).value;
    return {std::move(mu), space};
}

inline MomentVector to_float(const ExactMomentVector& exact)
{
    std::vector<double> mu;
    mu.reserve(exact.mu.size());
    const double factor = std::pow(std::numbers::pi, exact.space.pi_power());
    for (const auto& m : exact.mu) mu.push_back(to_double(m) * factor);
    return {std::move(mu), ExactPolynomialMoments{}, exact.space};
}

} // namespace biorth

#endif // BIORTH_MOMENTS_HPP
