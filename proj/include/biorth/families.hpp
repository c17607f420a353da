#ifndef BIORTH_FAMILIES_HPP
#define BIORTH_FAMILIES_HPP

#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace biorth {

enum class Family { LegendreShifted, Laguerre, LegendreSym, Chebyshev };

/// Type A: p_j = sum_i a_i^j x^i with a_j^j != 0.
/// Type B: p_j = sum_i a_i^j x^(j - 2i) with a_0^j != 0.
enum class OpsType { A, B };

/// One of the four classical orthonormal families together with its space.
class FamilySpec {
public:
    /// Legendre polynomials shifted to [0, b].
    static FamilySpec legendre_shifted(Rational b)
    {
        if (!(b > 0)) throw Error(ErrorCode::InvalidArgument, "shifted Legendre family requires b > 0");
        return FamilySpec(Family::LegendreShifted, std::move(b));
    }
    static FamilySpec laguerre() { return FamilySpec(Family::Laguerre, 0); }
    static FamilySpec legendre() { return FamilySpec(Family::LegendreSym, 0); }
    static FamilySpec chebyshev() { return FamilySpec(Family::Chebyshev, 0); }

    [[nodiscard]] Family family() const noexcept { return family_; }

    /// Interval length parameter; only meaningful for LegendreShifted.
    [[nodiscard]] const Rational& b() const noexcept { return b_; }

    [[nodiscard]] OpsType type() const noexcept
    {
        return family_ == Family::LegendreShifted || family_ == Family::Laguerre ? OpsType::A : OpsType::B;
    }

    [[nodiscard]] SpaceSpec space() const
    {
        switch (family_) {
        case Family::LegendreShifted: return SpaceSpec::bounded_unit(0, b_);
        case Family::Laguerre: return SpaceSpec::half_line_exp();
        case Family::LegendreSym: return SpaceSpec::bounded_unit(-1, 1);
        case Family::Chebyshev: return SpaceSpec::chebyshev();
        }
        return SpaceSpec::half_line_exp();
    }

    /// Scale attached to every squared normalisation (1/pi for Chebyshev).
    [[nodiscard]] ScaleTag norm_scale() const noexcept
    {
        return family_ == Family::Chebyshev ? ScaleTag::InvPi : ScaleTag::One;
    }

    /// CLI name: legendre0b, laguerre, legendre or chebyshev.
    [[nodiscard]] std::string name() const
    {
        switch (family_) {
        case Family::LegendreShifted: return "legendre0b";
        case Family::Laguerre: return "laguerre";
        case Family::LegendreSym: return "legendre";
        case Family::Chebyshev: return "chebyshev";
        }
        return {};
    }

    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;

private:
    FamilySpec(Family family, Rational b) : family_(family), b_(std::move(b)) {}

    Family family_;
    Rational b_;
};

inline FamilySpec family_from_name(const std::string& name, const Rational& b = 1)
{
    if (name == "legendre0b") return FamilySpec::legendre_shifted(b);
    if (name == "laguerre") return FamilySpec::laguerre();
    if (name == "legendre") return FamilySpec::legendre();
    if (name == "chebyshev") return FamilySpec::chebyshev();
    throw Error(ErrorCode::InvalidArgument, "unknown family '" + name + "'");
}

/// Split coefficient a_i^j = rat * s_j where s_j^2 = norm_sq (times the
/// family's norm_scale). Only same-degree products a_.^j a_.^j are ever
/// formed downstream, and those are rat * rat * norm_sq.
struct OpsCoeff {
    Rational rat;
    Rational norm_sq;
};

/// Squared normalisation s_j^2 (rational part).
inline Rational ops_norm_sq(const FamilySpec& fam, unsigned j)
{
    switch (fam.family()) {
    case Family::LegendreShifted: return Rational(2 * j + 1) / fam.b();
    case Family::Laguerre: return 1;
    case Family::LegendreSym: return Rational(BigInt(2 * j + 1), BigInt(2) << (2 * j));
    case Family::Chebyshev: return j == 0 ? 1 : 2;
    }
    return 0;
}

/// Monomial exponent that coefficient index i of p_j multiplies.
inline unsigned ops_exponent(const FamilySpec& fam, unsigned j, unsigned i)
{
    return fam.type() == OpsType::A ? i : j - 2 * i;
}

/// Coefficient a_i^j in the family's own indexing: Type A indexes x^i,
/// Type B indexes x^(j - 2i).
inline OpsCoeff ops_coeff(const FamilySpec& fam, unsigned j, unsigned i)
{
    const unsigned limit = fam.type() == OpsType::A ? j : j / 2;
    if (i > limit)
        throw Error(ErrorCode::IndexOutOfRange,
                    "coefficient index " + std::to_string(i) + " out of range for degree " + std::to_string(j));
    const int sign = (i % 2 == 0) ? 1 : -1;
    Rational rat;
    switch (fam.family()) {
    case Family::LegendreShifted:
        rat = Rational(binomial(j, i) * binomial(j + i, i)) / pow(fam.b(), i);
        if ((i + j) % 2 != 0) rat = -rat;
        break;
    case Family::Laguerre:
        rat = Rational(sign * binomial(j, i), factorial(i));
        break;
    case Family::LegendreSym:
        rat = Rational(sign * binomial(j, i) * binomial(2 * j - 2 * i, j));
        break;
    case Family::Chebyshev:
        if (j == 0) {
            rat = 1;
        } else {
            // (j/2) 2^(j-2i) (j-i-1)! / (i! (j-2i)!)
            rat = Rational(BigInt(sign) * j * (BigInt(1) << (j - 2 * i)) * factorial(j - i - 1),
                           2 * factorial(i) * factorial(j - 2 * i));
        }
        break;
    }
    return {std::move(rat), ops_norm_sq(fam, j)};
}

/// p_j = sqrt(norm_sq * norm_scale) * rat. The square root is never formed.
struct OpsPoly {
    ExactPoly rat;
    Rational norm_sq;
    ScaleTag norm_scale = ScaleTag::One;
};

inline OpsPoly ops_poly(const FamilySpec& fam, unsigned j)
{
    std::vector<Rational> coeffs(j + 1);
    const unsigned limit = fam.type() == OpsType::A ? j : j / 2;
    for (unsigned i = 0; i <= limit; ++i) coeffs[ops_exponent(fam, j, i)] = ops_coeff(fam, j, i).rat;
    return {ExactPoly(std::move(coeffs)), ops_norm_sq(fam, j), fam.norm_scale()};
}

/// Rational coefficient of x^exponent in the rat part of p_j (zero where the
/// family has no such term).
inline Rational ops_monomial_rat(const FamilySpec& fam, unsigned j, unsigned exponent)
{
    if (exponent > j) return 0;
    if (fam.type() == OpsType::A) return ops_coeff(fam, j, exponent).rat;
    if ((j - exponent) % 2 != 0) return 0;
    return ops_coeff(fam, j, (j - exponent) / 2).rat;
}

namespace detail {

// s_n s_m <rat_n, rat_m>; when n != m the irrational prefactor only matters
// if the rational inner product is nonzero, which is itself a violation.
inline Rational paired_inner(const FamilySpec& fam, const OpsPoly& pn, const OpsPoly& pm, bool same_degree)
{
    const SpaceSpec space = fam.space();
    PiRational r = inner_poly_scaled(space, pn.rat, pm.rat);
    if (!same_degree) return std::move(r.value);
    r.value *= pn.norm_sq;
    r.pi_power += pi_power(pn.norm_scale);
    if (r.pi_power != 0) throw Error(ErrorCode::ScaleMismatch, "normalisation did not cancel pi");
    return std::move(r.value);
}

} // namespace detail

struct OrthoViolation {
    unsigned n;
    unsigned m;
    Rational value;
};

/// Exact check that <p_n, p_m> = delta_nm for all n, m <= k.
inline std::vector<OrthoViolation> verify_orthonormal(const FamilySpec& fam, unsigned k)
{
    std::vector<OpsPoly> polys;
    polys.reserve(k + 1);
    for (unsigned j = 0; j <= k; ++j) polys.push_back(ops_poly(fam, j));
    std::vector<OrthoViolation> violations;
    for (unsigned n = 0; n <= k; ++n) {
        for (unsigned m = n; m <= k; ++m) {
            Rational v = detail::paired_inner(fam, polys[n], polys[m], n == m);
            if (v != (n == m ? 1 : 0)) violations.push_back({n, m, std::move(v)});
        }
    }
    return violations;
}

/// s_m <x^n, p_m>, which is rational for every family. Zero for n < m and
/// 1/rat of the distinguished coefficient (a_m^m for Type A, a_0^m for
/// Type B) at n = m.
inline Rational xn_pm_inner(const FamilySpec& fam, unsigned n, unsigned m)
{
    if (n > m)
        throw Error(ErrorCode::PreconditionViolated,
                    "<x^n, p_m> is only characterised for n <= m (n=" + std::to_string(n) + ", m=" + std::to_string(m)
                        + ")");
    const OpsPoly pm = ops_poly(fam, m);
    PiRational r = inner_poly_scaled(fam.space(), ExactPoly::monomial(n), pm.rat);
    r.value *= pm.norm_sq;
    r.pi_power += pi_power(pm.norm_scale);
    if (r.pi_power != 0 && r.value != 0) throw Error(ErrorCode::ScaleMismatch, "normalisation did not cancel pi");
    return std::move(r.value);
}

} // namespace biorth

#endif // BIORTH_FAMILIES_HPP
