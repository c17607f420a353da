#include <gtest/gtest.h>

#include <Eigen/Cholesky>

#include <cmath>

#include "biorth/baseline.hpp"
#include "biorth/regress.hpp"
#include "support.hpp"

using namespace biorth;

namespace {

// Exact inverse by Gauss-Jordan over the rationals.
std::vector<std::vector<Rational>> exact_inverse(std::vector<std::vector<Rational>> a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        const Rational d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

Rational norm1(const std::vector<std::vector<Rational>>& a)
{
    Rational best = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < a.size(); ++i) col += abs(a[i][j]);
        best = std::max(best, col);
    }
    return best;
}

} // namespace

TEST(Gram, Examples)
{
    const auto g = gram(SpaceSpec::bounded_unit(-1, 1), 1);
    EXPECT_EQ(g.entries(0, 0), 2.0);
    EXPECT_EQ(g.entries(0, 1), 0.0);
    EXPECT_EQ(g.entries(1, 1), 2.0 / 3.0);

    const auto h = gram(SpaceSpec::bounded_unit(0, 1), 1);
    EXPECT_EQ(h.entries(0, 1), 0.5);
    EXPECT_EQ(h.entries(1, 1), 1.0 / 3.0);

    EXPECT_EQ(gram(SpaceSpec::half_line_exp(), 0).entries(0, 0), 1.0);
    EXPECT_NEAR(gram(SpaceSpec::chebyshev(), 0).entries(0, 0), std::numbers::pi, 1e-15);
}

TEST(Gram, SymmetricHankel)
{
    const auto g = gram(SpaceSpec::bounded_unit(0, 2), 8);
    for (unsigned n = 0; n <= 8; ++n)
        for (unsigned j = 0; j <= 8; ++j) {
            EXPECT_EQ(g.entries(n, j), g.entries(j, n));
            if (n + 1 <= 8 && j >= 1) {
                EXPECT_EQ(g.entries(n + 1, j - 1), g.entries(n, j));
            }
        }
}

TEST(Gram, PositiveDefiniteAtSmallOrder)
{
    for (const auto& space : {SpaceSpec::bounded_unit(0, 1), SpaceSpec::bounded_unit(-1, 1),
                              SpaceSpec::bounded_unit(0, 3)})
        for (unsigned k = 0; k <= 10; ++k) {
            Eigen::LLT<Eigen::MatrixXd> llt(gram(space, k).entries);
            EXPECT_EQ(llt.info(), Eigen::Success) << k;
        }
}

TEST(SolveNormalEquations, SmallWellConditioned)
{
    const auto space = SpaceSpec::bounded_unit(-1, 1);
    const auto g = gram(space, 2);
    const auto mu = to_float(exact_moments(space, ExactPoly::monomial(1), 2));
    const auto c = solve_normal_equations(g, mu.mu);
    EXPECT_NEAR(c[0], 0.0, 1e-10);
    EXPECT_NEAR(c[1], 1.0, 1e-10);
    EXPECT_NEAR(c[2], 0.0, 1e-10);
}

TEST(SolveNormalEquations, IdentityReturnsRhs)
{
    const HankelGram g{3, Eigen::MatrixXd::Identity(4, 4), SpaceSpec::bounded_unit(0, 1)};
    const std::vector<double> rhs{1.5, -2.0, 3.25, 0.0};
    EXPECT_EQ(solve_normal_equations(g, rhs), rhs);
    EXPECT_EQ(condition_estimate(g), 1.0);
}

TEST(SolveNormalEquations, SingularPivotReported)
{
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 2, 4;
    const HankelGram g{1, m, SpaceSpec::bounded_unit(0, 1)};
    try {
        (void)solve_normal_equations(g, std::vector<double>{1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularToWorkingPrecision);
    }
    EXPECT_THROW((void)condition_estimate(g), Error);
    EXPECT_THROW((void)solve_normal_equations(g, std::vector<double>{1}), Error);
}

TEST(ConditionEstimate, OrderZeroIsOne)
{
    for (const auto& space : {SpaceSpec::bounded_unit(-1, 1), SpaceSpec::half_line_exp()})
        EXPECT_EQ(condition_estimate(gram(space, 0)), 1.0);
}

TEST(ConditionEstimate, MatchesExplicitInverse)
{
    const auto space = SpaceSpec::bounded_unit(-1, 1);
    const unsigned k = 5;
    std::vector<std::vector<Rational>> g(k + 1, std::vector<Rational>(k + 1));
    for (unsigned n = 0; n <= k; ++n)
        for (unsigned j = 0; j <= k; ++j) g[n][j] = inner_monomial(space, n, j);
    const double exact = to_double(norm1(g) * norm1(exact_inverse(g)));
    const double est = condition_estimate(gram(space, k));
    EXPECT_GE(est, exact / 3);
    EXPECT_LE(est, exact * 3);
}

TEST(ConditionEstimate, OrderThirtySix)
{
    const auto g = gram(SpaceSpec::bounded_unit(-1, 1), 36);
    EXPECT_GE(condition_estimate(g), 1e15);
    EXPECT_LT(std::abs(determinant(g)), 1e-300);
}

TEST(Baseline, AgreesWithProjectionAtSmallOrder)
{
    const FamilySpec fam = FamilySpec::legendre();
    const auto target = [](double x) { return std::exp(-x) * std::cos(2 * x); };
    for (unsigned k = 0; k <= 8; ++k) {
        const auto mu = moments_from_function(target, fam.space(), k);
        const FitModel ref = fit(fam, k, mu, 0);
        const FitModel base = baseline_fit(fam, gram(fam.space(), k), mu);
        double scale = 0;
        for (double c : ref.coeffs) scale = std::max(scale, std::abs(c));
        for (unsigned n = 0; n <= k; ++n) EXPECT_LE(std::abs(base.coeff(n) - ref.coeff(n)), 1e-8 * scale) << k;
    }
}

TEST(Baseline, MomentShortfall)
{
    const FamilySpec fam = FamilySpec::legendre();
    const MomentVector mu{{1.0}, ExactPolynomialMoments{}, fam.space()};
    EXPECT_THROW((void)baseline_fit(fam, gram(fam.space(), 2), mu), Error);
}
