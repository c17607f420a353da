#ifndef BIORTH_BIORTH_HPP
#define BIORTH_BIORTH_HPP

#include <algorithm>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compensated.hpp"
#include "error.hpp"
#include "families.hpp"
#include "model.hpp"
#include "moments.hpp"
#include "poly.hpp"

namespace biorth {

/// The polynomials beta_n^k, biorthogonal to the monomials x^m for m in the
/// active set: <beta_n, x^m> = delta_nm.
///
/// Each beta is held twice: in the monomial basis (exact rationals, scale
/// equal to the family's norm_scale) and spectrally, as the coefficients
/// sigma_{n,j} with beta_n = sum_j sigma_{n,j} s_j^2 rat_j, where rat_j is
/// the rational part of p_j. The Gram matrix <beta_n, beta_m> follows from
/// Parseval over the orthonormal p_j and carries the same scale as the betas.
///
/// Values are immutable; build, upgrade and downgrade return new sets.
class BiorthSet {
public:
    [[nodiscard]] const FamilySpec& family() const noexcept { return family_; }
    [[nodiscard]] unsigned order() const noexcept { return order_; }
    [[nodiscard]] const std::vector<unsigned>& active() const noexcept { return active_; }
    [[nodiscard]] std::size_t size() const noexcept { return active_.size(); }

    /// True while no monomial has been removed.
    [[nodiscard]] bool full() const noexcept { return active_.size() == order_ + 1; }

    [[nodiscard]] bool is_active(unsigned exponent) const
    {
        return std::binary_search(active_.begin(), active_.end(), exponent);
    }

    [[nodiscard]] std::size_t position(unsigned exponent) const
    {
        auto it = std::lower_bound(active_.begin(), active_.end(), exponent);
        if (it == active_.end() || *it != exponent)
            throw Error(ErrorCode::NotActive, "exponent " + std::to_string(exponent) + " is not active");
        return static_cast<std::size_t>(it - active_.begin());
    }

    [[nodiscard]] const ExactPoly& beta(unsigned exponent) const { return betas_[position(exponent)]; }

    /// sigma_{n,j} for j = 0..order.
    [[nodiscard]] const std::vector<Rational>& spectral(unsigned exponent) const
    {
        return spectral_[position(exponent)];
    }

    /// Rational part of <beta_n, beta_m>; the true value carries gram_scale().
    [[nodiscard]] const Rational& gram(unsigned n, unsigned m) const { return gram_[position(n)][position(m)]; }

    [[nodiscard]] ScaleTag gram_scale() const noexcept { return family_.norm_scale(); }

    [[nodiscard]] double gram_float(unsigned n, unsigned m) const
    {
        const double g = to_double(gram(n, m));
        return gram_scale() == ScaleTag::InvPi ? g / std::numbers::pi : g;
    }

    /// ||beta_n||^2 in double.
    [[nodiscard]] double norm_sq_float(unsigned n) const { return gram_float(n, n); }

private:
    explicit BiorthSet(FamilySpec family) : family_(std::move(family)) {}

    friend BiorthSet build(const FamilySpec& fam, unsigned k);
    friend BiorthSet upgrade(const BiorthSet& s);
    friend BiorthSet downgrade(const BiorthSet& s, unsigned ell);

    FamilySpec family_;
    unsigned order_ = 0;
    std::vector<unsigned> active_;
    std::vector<ExactPoly> betas_;
    std::vector<std::vector<Rational>> spectral_;
    std::vector<std::vector<Rational>> gram_;
    std::vector<Rational> norm_sq_;
};

/// beta_n^k = sum_j a_n^j p_j, with j running over n..k (Type A) or
/// n, n+2, .. <= k (Type B, where a_n^j is the coefficient on x^n).
inline BiorthSet build(const FamilySpec& fam, unsigned k)
{
    BiorthSet s(fam);
    s.order_ = k;
    std::vector<OpsPoly> ops;
    ops.reserve(k + 1);
    for (unsigned j = 0; j <= k; ++j) {
        ops.push_back(ops_poly(fam, j));
        s.norm_sq_.push_back(ops.back().norm_sq);
    }

    // w_j = s_j^2 rat_j, the monomial image of a unit spectral coefficient.
    std::vector<std::vector<Rational>> weighted(k + 1);
    for (unsigned j = 0; j <= k; ++j) {
        weighted[j].resize(k + 1);
        for (unsigned i = 0; i <= j; ++i) weighted[j][i] = ops[j].rat.coeff(i) * ops[j].norm_sq;
    }

    for (unsigned n = 0; n <= k; ++n) {
        s.active_.push_back(n);
        std::vector<Rational> sigma(k + 1);
        for (unsigned j = n; j <= k; ++j) sigma[j] = ops[j].rat.coeff(n);
        std::vector<Rational> coeffs(k + 1);
        for (unsigned j = n; j <= k; ++j) {
            if (sigma[j] == 0) continue;
            for (unsigned i = 0; i <= j; ++i)
                if (weighted[j][i] != 0) coeffs[i] += sigma[j] * weighted[j][i];
        }
        s.betas_.emplace_back(std::move(coeffs), fam.norm_scale());
        s.spectral_.push_back(std::move(sigma));
    }

    s.gram_.assign(k + 1, std::vector<Rational>(k + 1));
    for (unsigned n = 0; n <= k; ++n) {
        for (unsigned m = n; m <= k; ++m) {
            Rational g(0);
            for (unsigned j = m; j <= k; ++j)
                if (s.spectral_[n][j] != 0 && s.spectral_[m][j] != 0)
                    g += s.spectral_[n][j] * s.spectral_[m][j] * s.norm_sq_[j];
            s.gram_[n][m] = g;
            s.gram_[m][n] = std::move(g);
        }
    }
    return s;
}

/// Order k -> k+1 by adding the p_{k+1} contribution to every beta.
inline BiorthSet upgrade(const BiorthSet& s)
{
    if (!s.full())
        throw Error(ErrorCode::UpgradeAfterRemoval, "upgrade is only defined on a set without removals");
    const FamilySpec& fam = s.family_;
    const unsigned k = s.order_;
    const unsigned next = k + 1;
    const OpsPoly p_next = ops_poly(fam, next);

    BiorthSet out = s;
    out.order_ = next;
    out.norm_sq_.push_back(p_next.norm_sq);
    const ExactPoly weighted = poly_scale(ExactPoly(p_next.rat.coeffs(), fam.norm_scale()), p_next.norm_sq);

    std::vector<Rational> added(next + 1);
    for (unsigned n = 0; n <= k; ++n) {
        bool unchanged = false;
        if (fam.type() == OpsType::A) {
            added[n] = ops_coeff(fam, next, n).rat;
        } else if ((k - n + 1) % 2 == 0) {
            added[n] = ops_coeff(fam, next, (k - n + 1) / 2).rat;
        } else {
            unchanged = true;
        }
        out.spectral_[n].push_back(added[n]);
        std::vector<Rational> coeffs = s.betas_[n].coeffs();
        coeffs.resize(next + 1);
        out.betas_[n] = ExactPoly(std::move(coeffs), fam.norm_scale());
        if (!unchanged && added[n] != 0) out.betas_[n] = poly_add(out.betas_[n], poly_scale(weighted, added[n]));
    }
    added[next] = ops_coeff(fam, next, fam.type() == OpsType::A ? next : 0).rat;
    out.active_.push_back(next);
    std::vector<Rational> sigma(next + 1);
    sigma[next] = added[next];
    out.spectral_.push_back(std::move(sigma));
    out.betas_.push_back(poly_scale(weighted, added[next]));

    for (auto& row : out.gram_) row.resize(next + 1);
    out.gram_.emplace_back(next + 1);
    for (unsigned n = 0; n <= next; ++n) {
        for (unsigned m = n; m <= next; ++m) {
            if (added[n] == 0 || added[m] == 0) continue;
            const Rational delta = added[n] * added[m] * p_next.norm_sq;
            out.gram_[n][m] += delta;
            if (m != n) out.gram_[m][n] += delta;
        }
    }
    return out;
}

/// Removes x^ell from the span:
///   beta_n <- beta_n - beta_ell <beta_ell, beta_n> / <beta_ell, beta_ell>.
/// The Gram matrix takes the matching rank-one correction.
inline BiorthSet downgrade(const BiorthSet& s, unsigned ell)
{
    const std::size_t pl = s.position(ell);
    if (s.active_.size() < 2) throw Error(ErrorCode::LastElement, "cannot remove the last active monomial");
    const Rational& g_ll = s.gram_[pl][pl];

    BiorthSet out(s.family_);
    out.order_ = s.order_;
    out.norm_sq_ = s.norm_sq_;
    const std::size_t count = s.active_.size();
    std::vector<std::size_t> kept;
    for (std::size_t p = 0; p < count; ++p)
        if (p != pl) kept.push_back(p);

    for (std::size_t p : kept) {
        const Rational ratio = s.gram_[pl][p] / g_ll;
        out.active_.push_back(s.active_[p]);
        if (ratio == 0) {
            out.betas_.push_back(s.betas_[p]);
            out.spectral_.push_back(s.spectral_[p]);
            continue;
        }
        out.betas_.push_back(poly_sub(s.betas_[p], poly_scale(s.betas_[pl], ratio)));
        std::vector<Rational> sigma = s.spectral_[p];
        for (std::size_t j = 0; j < sigma.size(); ++j) sigma[j] -= ratio * s.spectral_[pl][j];
        out.spectral_.push_back(std::move(sigma));
    }

    out.gram_.assign(kept.size(), std::vector<Rational>(kept.size()));
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = a; b < kept.size(); ++b) {
            Rational g = s.gram_[kept[a]][kept[b]] - s.gram_[pl][kept[a]] * s.gram_[pl][kept[b]] / g_ll;
            out.gram_[a][b] = g;
            out.gram_[b][a] = std::move(g);
        }
    }
    return out;
}

namespace detail {

inline void check_moments(const BiorthSet& s, const SpaceSpec& space, std::size_t available)
{
    if (!(space == s.family().space()))
        throw Error(ErrorCode::InvalidArgument, "moments were computed in a different space than the family's");
    if (available < s.order() + 1)
        throw Error(ErrorCode::MomentShortfall, "need " + std::to_string(s.order() + 1) + " moments, got "
                                                    + std::to_string(available));
}

} // namespace detail

/// <f, beta_n> from the moments of f, as a compensated dot product of the
/// double-double rounded beta coefficients with mu.
inline double moment_inner(const BiorthSet& s, unsigned exponent, const MomentVector& m)
{
    detail::check_moments(s, m.space, m.mu.size());
    const ExactPoly& beta = s.beta(exponent);
    CompensatedSum acc;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        const Rational& c = beta.coeffs()[i];
        if (c == 0) continue;
        acc.add_product(to_double_double(c), m.mu[i]);
    }
    const double v = acc.value();
    return beta.scale() == ScaleTag::InvPi ? v / std::numbers::pi : v;
}

/// Removal scores |<f, beta_l>|^2 / ||beta_l||^2, aligned with active().
inline std::vector<double> removal_scores(const BiorthSet& s, const MomentVector& m)
{
    std::vector<double> scores;
    scores.reserve(s.size());
    for (unsigned ell : s.active()) {
        const double c = moment_inner(s, ell, m);
        scores.push_back(c * c / s.norm_sq_float(ell));
    }
    return scores;
}

/// Scores within this relative distance of each other (measured against the
/// largest score) are treated as ties.
inline constexpr double kRemovalTieTolerance = 1e-12;

/// Exponent whose removal increases the L2 error the least; ties go to the
/// smallest exponent.
inline unsigned select_removal(const BiorthSet& s, const MomentVector& m)
{
    if (s.size() == 0) throw Error(ErrorCode::EmptyActive, "no active monomials to remove");
    const auto scores = removal_scores(s, m);
    const double top = *std::max_element(scores.begin(), scores.end());
    const double tol = kRemovalTieTolerance * top;
    std::size_t best = 0;
    for (std::size_t p = 1; p < scores.size(); ++p)
        if (scores[p] < scores[best] - tol) best = p;
    return s.active()[best];
}

/// Exact variant of select_removal for rational moments: exact minimum,
/// smallest exponent on ties.
inline unsigned select_removal(const BiorthSet& s, const ExactMomentVector& m)
{
    if (s.size() == 0) throw Error(ErrorCode::EmptyActive, "no active monomials to remove");
    detail::check_moments(s, m.space, m.mu.size());
    std::optional<Rational> best_score;
    unsigned best = 0;
    for (unsigned ell : s.active()) {
        const ExactPoly& beta = s.beta(ell);
        Rational c(0);
        for (std::size_t i = 0; i < beta.size(); ++i) c += beta.coeffs()[i] * m.mu[i];
        Rational score = c * c / s.gram(ell, ell);
        if (!best_score || score < *best_score) {
            best_score = std::move(score);
            best = ell;
        }
    }
    return best;
}

/// c_n = <f, beta_n> for every active n.
inline FitModel project(const BiorthSet& s, const MomentVector& m)
{
    detail::check_moments(s, m.space, m.mu.size());
    FitModel model{s.active(), {}, std::nullopt, s.family(), {}, {}};
    model.coeffs.reserve(s.size());
    for (unsigned n : s.active()) model.coeffs.push_back(moment_inner(s, n, m));
    model.diagnostics.n_params = model.n_params();
    return model;
}

/// Exact projection for rational moments.
inline FitModel project_exact(const BiorthSet& s, const ExactMomentVector& m)
{
    detail::check_moments(s, m.space, m.mu.size());
    // A beta carrying 1/pi meets moments carrying pi (Chebyshev); otherwise
    // neither carries a factor.
    FitModel model{s.active(), {}, std::vector<Rational>{}, s.family(), {}, {}};
    for (unsigned n : s.active()) {
        const ExactPoly& beta = s.beta(n);
        Rational c(0);
        for (std::size_t i = 0; i < beta.size(); ++i)
            if (beta.coeffs()[i] != 0) c += beta.coeffs()[i] * m.mu[i];
        model.coeffs.push_back(to_double(c));
        model.coeffs_exact->push_back(std::move(c));
    }
    model.diagnostics.n_params = model.n_params();
    return model;
}

/// The fitted polynomial as an exact polynomial (requires coeffs_exact).
inline ExactPoly exact_polynomial(const FitModel& model)
{
    if (!model.coeffs_exact) throw Error(ErrorCode::InvalidArgument, "model has no exact coefficients");
    unsigned top = 0;
    for (unsigned e : model.exponents) top = std::max(top, e);
    std::vector<Rational> coeffs(top + 1);
    for (std::size_t i = 0; i < model.exponents.size(); ++i) coeffs[model.exponents[i]] = (*model.coeffs_exact)[i];
    return ExactPoly(std::move(coeffs));
}

} // namespace biorth

#endif // BIORTH_BIORTH_HPP
