#ifndef BIORTH_TESTS_SUPPORT_HPP
#define BIORTH_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "biorth/biorth.hpp"
#include "biorth/families.hpp"
#include "biorth/poly.hpp"

namespace biorth::test {

inline std::vector<FamilySpec> all_families()
{
    return {FamilySpec::legendre_shifted(1), FamilySpec::legendre_shifted(Rational(7, 2)), FamilySpec::laguerre(),
            FamilySpec::legendre(), FamilySpec::chebyshev()};
}

// <beta, x^m> with the pi factors resolved; throws if they do not cancel.
inline Rational beta_monomial_inner(const BiorthSet& s, unsigned n, unsigned m)
{
    return inner_poly(s.family().space(), s.beta(n), ExactPoly::monomial(m));
}

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Polynomial with small random rational coefficients.
inline ExactPoly random_poly(std::mt19937_64& rng, unsigned degree)
{
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    std::vector<Rational> c;
    for (unsigned i = 0; i <= degree; ++i) c.emplace_back(num(rng), den(rng));
    return ExactPoly(std::move(c));
}

} // namespace biorth::test

#endif // BIORTH_TESTS_SUPPORT_HPP
