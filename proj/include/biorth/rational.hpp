#ifndef BIORTH_RATIONAL_HPP
#define BIORTH_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace biorth {

using BigInt = boost::multiprecision::cpp_int;
/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator.
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

// num / den for num > 0, den > 0, rounded to nearest double.
inline double positive_ratio_to_double(BigInt num, BigInt den)
{
    using boost::multiprecision::msb;
    const long shift = 64 - (static_cast<long>(msb(num)) - static_cast<long>(msb(den)));
    if (shift > 0)
        num <<= static_cast<unsigned>(shift);
    else if (shift < 0)
        den <<= static_cast<unsigned>(-shift);
    BigInt rem;
    BigInt quo;
    boost::multiprecision::divide_qr(num, den, quo, rem);
    // quo has 64 or 65 significant bits; fold the extra bit and the remainder
    // into a sticky bit so the hardware conversion rounds correctly.
    long extra = static_cast<long>(msb(quo)) - 63;
    bool sticky = rem != 0;
    if (extra > 0) {
        sticky = sticky || bit_test(quo, 0);
        quo >>= 1;
    } else {
        extra = 0;
    }
    auto bits = static_cast<std::uint64_t>(quo);
    if (sticky) bits |= 1u;
    return std::ldexp(static_cast<double>(bits), static_cast<int>(extra - shift));
}

} // namespace detail

inline double to_double(const Rational& q)
{
    const BigInt num = numerator(q);
    if (num == 0) return 0.0;
    const double magnitude = detail::positive_ratio_to_double(abs(num), denominator(q));
    return num < 0 ? -magnitude : magnitude;
}

/// Exact value of a finite double.
inline Rational from_double(double x)
{
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite value has no rational form");
    if (x == 0.0) return Rational(0);
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    Rational r{BigInt(scaled)};
    if (exponent > 0)
        r *= Rational(BigInt(1) << exponent);
    else if (exponent < 0)
        r /= Rational(BigInt(1) << -exponent);
    return r;
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

/// Rounds q to a double-double; relative error is around 2^-104.
inline DoubleDouble to_double_double(const Rational& q)
{
    const double hi = to_double(q);
    return {hi, to_double(q - from_double(hi))};
}

inline Rational pow(const Rational& base, unsigned exponent)
{
    Rational result(1);
    Rational b = base;
    while (exponent != 0) {
        if (exponent & 1u) result *= b;
        exponent >>= 1;
        if (exponent != 0) b *= b;
    }
    return result;
}

inline constexpr unsigned kFactorialTableSize = 65;

/// n! for n <= 64 from an eagerly built table, computed beyond that.
inline BigInt factorial(unsigned n)
{
    static const std::vector<BigInt> table = [] {
        std::vector<BigInt> t(kFactorialTableSize);
        t[0] = 1;
        for (unsigned i = 1; i < kFactorialTableSize; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    if (n < kFactorialTableSize) return table[n];
    BigInt big = table.back();
    for (unsigned i = kFactorialTableSize; i <= n; ++i) big *= i;
    return big;
}

/// Binomial coefficient by the multiplicative formula; every partial product
/// is itself a binomial so each division is exact.
inline BigInt binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (unsigned i = 0; i < k; ++i) {
        c *= (n - i);
        c /= (i + 1);
    }
    return c;
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q)
{
    const BigInt den = denominator(q);
    if (den == 1) return numerator(q).str();
    return numerator(q).str() + "/" + den.str();
}

/// Parses "p", "p/q" or a finite decimal such as "2.5" exactly.
inline Rational parse_rational(const std::string& text)
{
    auto fail = [&] { return Error(ErrorCode::InvalidArgument, "not a rational number: '" + text + "'"); };
    // Decimal integer with optional sign; leading zeros must not select octal.
    auto integer = [&](std::string t) {
        bool neg = false;
        if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
            neg = t[0] == '-';
            t.erase(0, 1);
        }
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) throw fail();
        t.erase(0, std::min(t.find_first_not_of('0'), t.size() - 1));
        BigInt v(t);
        return neg ? BigInt(-v) : v;
    };
    if (text.empty()) throw fail();
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            BigInt num = integer(text.substr(0, slash));
            BigInt den = integer(text.substr(slash + 1));
            if (den == 0) throw fail();
            if (den < 0) {
                num = -num;
                den = -den;
            }
            return Rational(num, den);
        }
        if (auto dot = text.find('.'); dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            if (digits.empty() || digits == "-" || digits == "+") throw fail();
            const auto decimals = static_cast<unsigned>(text.size() - dot - 1);
            BigInt den = 1;
            for (unsigned i = 0; i < decimals; ++i) den *= 10;
            return Rational(integer(digits), den);
        }
        return Rational(integer(text));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw fail();
    }
}

} // namespace biorth

#endif // BIORTH_RATIONAL_HPP
