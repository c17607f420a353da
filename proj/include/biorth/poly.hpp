#ifndef BIORTH_POLY_HPP
#define BIORTH_POLY_HPP

#include <algorithm>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "compensated.hpp"
#include "error.hpp"
#include "rational.hpp"

namespace biorth {

/// Symbolic global factor carried by a polynomial. InvPi means every stored
/// coefficient is implicitly multiplied by 1/pi.
enum class ScaleTag { One, InvPi };

inline int pi_power(ScaleTag tag) noexcept { return tag == ScaleTag::InvPi ? -1 : 0; }

enum class IntervalKind { Bounded, HalfLine };
enum class WeightKind { Unit, ExpNeg, ChebyshevW };

/// Interval and weight of a weighted L2 space. Only three combinations exist:
/// a bounded interval with unit weight, [0, inf) with exp(-x) and [-1, 1]
/// with 1/sqrt(1 - x^2).
class SpaceSpec {
public:
    static SpaceSpec bounded_unit(Rational lo, Rational hi)
    {
        if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "bounded interval requires lo < hi");
        return SpaceSpec(IntervalKind::Bounded, WeightKind::Unit, std::move(lo), std::move(hi));
    }

    static SpaceSpec half_line_exp() { return SpaceSpec(IntervalKind::HalfLine, WeightKind::ExpNeg, 0, 0); }

    static SpaceSpec chebyshev() { return SpaceSpec(IntervalKind::Bounded, WeightKind::ChebyshevW, -1, 1); }

    [[nodiscard]] IntervalKind interval() const noexcept { return interval_; }
    [[nodiscard]] WeightKind weight() const noexcept { return weight_; }
    [[nodiscard]] bool bounded() const noexcept { return interval_ == IntervalKind::Bounded; }

    /// Lower end; 0 on the half line.
    [[nodiscard]] const Rational& lo() const noexcept { return lo_; }

    [[nodiscard]] const Rational& hi() const
    {
        if (!bounded()) throw Error(ErrorCode::UnsupportedSpace, "half line has no upper end");
        return hi_;
    }

    /// Power of pi multiplying every inner product of rational polynomials.
    [[nodiscard]] int pi_power() const noexcept { return weight_ == WeightKind::ChebyshevW ? 1 : 0; }

    [[nodiscard]] bool contains(double x) const
    {
        if (!std::isfinite(x)) return false;
        if (x < to_double(lo_)) return false;
        return !bounded() || x <= to_double(hi_);
    }

    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

private:
    SpaceSpec(IntervalKind interval, WeightKind weight, Rational lo, Rational hi)
        : interval_(interval), weight_(weight), lo_(std::move(lo)), hi_(std::move(hi))
    {
    }

    IntervalKind interval_;
    WeightKind weight_;
    Rational lo_;
    Rational hi_;
};

/// Dense polynomial with exact rational coefficients indexed by exponent.
class ExactPoly {
public:
    ExactPoly() = default;

    explicit ExactPoly(std::vector<Rational> coeffs, ScaleTag scale = ScaleTag::One)
        : coeffs_(std::move(coeffs)), scale_(scale)
    {
    }

    static ExactPoly zero(std::size_t size = 0, ScaleTag scale = ScaleTag::One)
    {
        return ExactPoly(std::vector<Rational>(size), scale);
    }

    static ExactPoly monomial(unsigned exponent, Rational c = 1, ScaleTag scale = ScaleTag::One)
    {
        std::vector<Rational> coeffs(exponent + 1);
        coeffs[exponent] = std::move(c);
        return ExactPoly(std::move(coeffs), scale);
    }

    [[nodiscard]] const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] ScaleTag scale() const noexcept { return scale_; }

    [[nodiscard]] Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }

    /// Highest exponent with a nonzero coefficient, -1 for the zero polynomial.
    [[nodiscard]] int degree() const noexcept
    {
        for (auto i = coeffs_.size(); i-- > 0;)
            if (coeffs_[i] != 0) return static_cast<int>(i);
        return -1;
    }

    [[nodiscard]] bool is_zero() const noexcept { return degree() < 0; }

    /// Exact value at x of the stored coefficients (the InvPi factor is not
    /// applied).
    [[nodiscard]] Rational eval_exact(const Rational& x) const
    {
        Rational acc(0);
        for (auto i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    friend bool operator==(const ExactPoly& a, const ExactPoly& b)
    {
        if (a.scale_ != b.scale_ && !(a.is_zero() && b.is_zero())) return false;
        const auto n = std::max(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i)
            if (a.coeff(i) != b.coeff(i)) return false;
        return true;
    }

    /// Ascending human-readable form such as "2 - x" or "-1/2 + 3*x^2".
    [[nodiscard]] std::string to_string() const
    {
        std::ostringstream out;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational& c = coeffs_[i];
            if (c == 0) continue;
            const Rational mag = abs(c);
            if (first)
                out << (c < 0 ? "-" : "");
            else
                out << (c < 0 ? " - " : " + ");
            first = false;
            if (i == 0 || mag != 1) {
                out << biorth::to_string(mag);
                if (i != 0) out << "*";
            }
            if (i == 1) out << "x";
            if (i > 1) out << "x^" << i;
        }
        if (first) out << "0";
        if (scale_ == ScaleTag::InvPi) return "(1/pi)*(" + out.str() + ")";
        return out.str();
    }

private:
    std::vector<Rational> coeffs_;
    ScaleTag scale_ = ScaleTag::One;
};

inline ExactPoly poly_add(const ExactPoly& a, const ExactPoly& b)
{
    if (a.scale() != b.scale()) throw Error(ErrorCode::ScaleMismatch, "cannot add polynomials with different scale tags");
    std::vector<Rational> out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
    return ExactPoly(std::move(out), a.scale());
}

inline ExactPoly poly_scale(const ExactPoly& a, const Rational& r)
{
    std::vector<Rational> out(a.coeffs());
    for (auto& c : out) c *= r;
    return ExactPoly(std::move(out), a.scale());
}

inline ExactPoly poly_sub(const ExactPoly& a, const ExactPoly& b) { return poly_add(a, poly_scale(b, -1)); }

inline ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) { return poly_add(a, b); }
inline ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) { return poly_sub(a, b); }
inline ExactPoly operator*(const Rational& r, const ExactPoly& a) { return poly_scale(a, r); }

/// Exact <x^i, x^j>. For the Chebyshev weight the true value is the returned
/// rational times pi (see SpaceSpec::pi_power).
inline Rational inner_monomial(const SpaceSpec& space, unsigned i, unsigned j)
{
    const unsigned s = i + j;
    switch (space.weight()) {
    case WeightKind::Unit: {
        const Rational hi = pow(space.hi(), s + 1);
        const Rational lo = pow(space.lo(), s + 1);
        return (hi - lo) / (s + 1);
    }
    case WeightKind::ExpNeg:
        return Rational(factorial(s));
    case WeightKind::ChebyshevW: {
        // Wallis: integral of x^(2m) / sqrt(1 - x^2) over [-1, 1] is pi * C(2m, m) / 4^m.
        if (s % 2 != 0) return 0;
        const unsigned m = s / 2;
        return Rational(binomial(2 * m, m), BigInt(1) << (2 * m));
    }
    }
    return 0;
}

/// Exact rational times an integer power of pi.
struct PiRational {
    Rational value;
    int pi_power = 0;

    [[nodiscard]] double to_double() const
    {
        return biorth::to_double(value) * std::pow(std::numbers::pi, pi_power);
    }
};

/// Bilinear expansion of <a, b> keeping track of the pi factors contributed
/// by scale tags and by the Chebyshev weight.
inline PiRational inner_poly_scaled(const SpaceSpec& space, const ExactPoly& a, const ExactPoly& b)
{
    Rational acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b.coeffs()[j] == 0) continue;
            acc += a.coeffs()[i] * b.coeffs()[j]
                * inner_monomial(space, static_cast<unsigned>(i), static_cast<unsigned>(j));
        }
    }
    return {acc, space.pi_power() + biorth::pi_power(a.scale()) + biorth::pi_power(b.scale())};
}

/// Exact <a, b> when the pi factors cancel; throws ScaleMismatch otherwise.
inline Rational inner_poly(const SpaceSpec& space, const ExactPoly& a, const ExactPoly& b)
{
    PiRational r = inner_poly_scaled(space, a, b);
    if (r.pi_power != 0 && r.value != 0)
        throw Error(ErrorCode::ScaleMismatch, "inner product is not rational (pi power "
                        + std::to_string(r.pi_power) + ")");
    return std::move(r.value);
}

/// Compensated Horner evaluation in double; applies 1/pi for InvPi.
inline double eval_float(const ExactPoly& a, double x)
{
    std::vector<double> coeffs(a.size());
    std::transform(a.coeffs().begin(), a.coeffs().end(), coeffs.begin(),
                   [](const Rational& c) { return to_double(c); });
    const double v = compensated_horner(coeffs, x);
    return a.scale() == ScaleTag::InvPi ? v / std::numbers::pi : v;
}

} // namespace biorth

#endif // BIORTH_POLY_HPP
