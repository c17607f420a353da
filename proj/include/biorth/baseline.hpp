#ifndef BIORTH_BASELINE_HPP
#define BIORTH_BASELINE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "moments.hpp"
#include "poly.hpp"

// Normal equations over the monomial Gram matrix, solved the textbook way in
// double precision. This is the ill-conditioned route that the biorthogonal
// projection avoids; it is kept deliberately naive (no scaling, no QR).

namespace biorth {

/// G(n, j) = <x^n, x^j> rounded once to double.
struct HankelGram {
    unsigned k;
    Eigen::MatrixXd entries;
    SpaceSpec space;
};

inline HankelGram gram(const SpaceSpec& space, unsigned k)
{
    Eigen::MatrixXd g(k + 1, k + 1);
    const double factor = std::pow(std::numbers::pi, space.pi_power());
    for (unsigned n = 0; n <= k; ++n)
        for (unsigned j = 0; j <= k; ++j) g(n, j) = to_double(inner_monomial(space, n, j)) * factor;
    return {k, std::move(g), space};
}

/// Pivots below this fraction of the largest Gram entry count as zero.
inline constexpr double kPivotThreshold = 1e-30;

namespace detail {

inline Eigen::PartialPivLU<Eigen::MatrixXd> factor_checked(const Eigen::MatrixXd& g)
{
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
    const double scale = g.cwiseAbs().maxCoeff();
    const auto& u = lu.matrixLU();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        if (!(std::abs(u(i, i)) > kPivotThreshold * scale))
            throw Error(ErrorCode::SingularToWorkingPrecision,
                        "pivot " + std::to_string(i) + " is " + std::to_string(std::abs(u(i, i))));
    }
    return lu;
}

} // namespace detail

/// Gaussian elimination with partial pivoting on G c = rhs.
inline std::vector<double> solve_normal_equations(const HankelGram& g, std::span<const double> rhs)
{
    if (rhs.size() != static_cast<std::size_t>(g.entries.rows()))
        throw Error(ErrorCode::InvalidArgument, "right-hand side length does not match the Gram matrix");
    const auto lu = detail::factor_checked(g.entries);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::VectorXd c = lu.solve(b);
    return {c.data(), c.data() + c.size()};
}

/// Normal-equations fit from the first k+1 moments.
inline FitModel baseline_fit(const FamilySpec& fam, const HankelGram& g, const MomentVector& m)
{
    if (m.mu.size() < g.k + 1) throw Error(ErrorCode::MomentShortfall, "not enough moments for the Gram order");
    const std::span<const double> rhs(m.mu.data(), g.k + 1);
    FitModel model{{}, solve_normal_equations(g, rhs), std::nullopt, fam, {}, {}};
    for (unsigned n = 0; n <= g.k; ++n) model.exponents.push_back(n);
    model.diagnostics.n_params = model.n_params();
    return model;
}

/// 1-norm condition number ||G||_1 ||G^-1||_1, with ||G^-1||_1 from the
/// Hager-Higham estimator on the LU factors.
inline double condition_estimate(const HankelGram& g)
{
    const auto lu = detail::factor_checked(g.entries);
    return 1.0 / lu.rcond();
}

/// Determinant from the LU factors (underflows to 0 for large k).
inline double determinant(const HankelGram& g)
{
    return Eigen::PartialPivLU<Eigen::MatrixXd>(g.entries).determinant();
}

} // namespace biorth

#endif // BIORTH_BASELINE_HPP
