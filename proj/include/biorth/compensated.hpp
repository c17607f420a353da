#ifndef BIORTH_COMPENSATED_HPP
#define BIORTH_COMPENSATED_HPP

#include <cmath>
#include <span>

#include "rational.hpp"

// Error-free transformations and the compensated kernels built on them.
// Results are as accurate as if computed in twice the working precision and
// then rounded once.

namespace biorth {

struct TwoTerm {
    double value;
    double error;
};

inline TwoTerm two_sum(double a, double b) noexcept
{
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline TwoTerm two_prod(double a, double b) noexcept
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

/// Double-double accumulator for dot products.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const auto [s, e] = two_sum(sum_, x);
        sum_ = s;
        err_ += e;
    }

    void add_product(double a, double b) noexcept
    {
        const auto [p, pe] = two_prod(a, b);
        add(p);
        err_ += pe;
    }

    /// (hi + lo) * b with the lo part's own rounding dropped.
    void add_product(const DoubleDouble& a, double b) noexcept
    {
        add_product(a.hi, b);
        err_ += a.lo * b;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + err_; }

private:
    double sum_ = 0.0;
    double err_ = 0.0;
};

/// Compensated Horner scheme (Graillat, Langlois and Louvet) over ascending
/// coefficients.
inline double compensated_horner(std::span<const double> coeffs, double x) noexcept
{
    if (coeffs.empty()) return 0.0;
    double s = coeffs.back();
    double c = 0.0;
    for (auto i = coeffs.size() - 1; i-- > 0;) {
        const auto [p, pe] = two_prod(s, x);
        const auto [t, se] = two_sum(p, coeffs[i]);
        s = t;
        c = std::fma(c, x, pe + se);
    }
    return s + c;
}

} // namespace biorth

#endif // BIORTH_COMPENSATED_HPP
