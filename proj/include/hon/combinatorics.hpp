#ifndef HON_COMBINATORICS_HPP
#define HON_COMBINATORICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <hon/errors.hpp>

#ifndef HON_COMBINATORICS_MEMO_CAP
#define HON_COMBINATORICS_MEMO_CAP 64
#endif

namespace hon
{

using BigNat = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Working precision for moment assembly. Inputs are doubles; the alternating
// sums are carried at 50 digits and rounded once at the end.
using WideReal = boost::multiprecision::cpp_bin_float_50;

inline constexpr int kMemoCap = HON_COMBINATORICS_MEMO_CAP;

namespace detail
{

struct FactorialTable {
    std::vector<BigNat> values;
    FactorialTable() : values(kMemoCap + 1)
    {
        values[0] = 1;
        for (int i = 1; i <= kMemoCap; ++i) {
            values[i] = values[i - 1] * i;
        }
    }
};

// Row r holds S2(r, 0..r).
struct Stirling2Table {
    std::vector<std::vector<BigNat>> rows;
    Stirling2Table() : rows(kMemoCap + 1)
    {
        rows[0] = {BigNat(1)};
        for (int r = 0; r < kMemoCap; ++r) {
            auto &next = rows[r + 1];
            next.assign(r + 2, BigNat(0));
            for (int i = 1; i <= r + 1; ++i) {
                BigNat carry = i <= r ? BigNat(i) * rows[r][i] : BigNat(0);
                next[i] = carry + rows[r][i - 1];
            }
        }
    }
};

// Function-local statics: initialization is thread-safe, reads are immutable.
inline const FactorialTable &factorial_table()
{
    static const FactorialTable table;
    return table;
}

inline const Stirling2Table &stirling2_table()
{
    static const Stirling2Table table;
    return table;
}

} // namespace detail

inline BigNat factorial(std::int64_t n)
{
    if (n < 0) {
        throw DomainError("factorial: negative argument " + std::to_string(n));
    }
    if (n <= kMemoCap) {
        return detail::factorial_table().values[static_cast<std::size_t>(n)];
    }
    BigNat out = detail::factorial_table().values[kMemoCap];
    for (std::int64_t i = kMemoCap + 1; i <= n; ++i) {
        out *= i;
    }
    return out;
}

/// n!! with the convention (-1)!! = 0!! = 1.
inline BigNat double_factorial(std::int64_t n)
{
    if (n < -1) {
        throw DomainError("double_factorial: argument below -1: " + std::to_string(n));
    }
    BigNat out = 1;
    for (std::int64_t i = n; i > 1; i -= 2) {
        out *= i;
    }
    return out;
}

/// nCr, zero outside 0 <= r <= n.
inline BigNat binomial(std::int64_t n, std::int64_t r)
{
    if (n < 0 || r < 0 || r > n) {
        return 0;
    }
    if (r > n - r) {
        r = n - r;
    }
    BigNat out = 1;
    // Each partial product out * (n - i) / (i + 1) is itself a binomial.
    for (std::int64_t i = 0; i < r; ++i) {
        out *= (n - i);
        out /= (i + 1);
    }
    return out;
}

/// m(m-1)...(m-j+1); 1 for j = 0 and 0 for j > m.
inline BigNat falling_factorial(std::int64_t m, std::int64_t j)
{
    if (j < 0 || m < 0) {
        throw DomainError("falling_factorial: negative argument");
    }
    if (j > m) {
        return 0;
    }
    BigNat out = 1;
    for (std::int64_t i = 0; i < j; ++i) {
        out *= (m - i);
    }
    return out;
}

/// (1/2)_m = (1/2)(3/2)...((2m-1)/2) = (2m-1)!!/2^m.
inline Rational pochhammer_half(std::int64_t m)
{
    if (m < 0) {
        throw DomainError("pochhammer_half: negative argument");
    }
    Rational out = 1;
    for (std::int64_t i = 0; i < m; ++i) {
        out *= Rational(2 * i + 1, 2);
    }
    return out;
}

/// Coefficient t_{2r} = (2r)!/(2^r r!) of the r-th contraction term in the
/// normal-ordered expansion of (a^dagger + a)^m.
inline BigNat hong_mandel_coefficient(std::int64_t r)
{
    if (r < 0) {
        throw DomainError("hong_mandel_coefficient: negative argument");
    }
    BigNat pow2 = 1;
    pow2 <<= static_cast<unsigned>(r);
    return factorial(2 * r) / (pow2 * factorial(r));
}

/// Stirling number of the second kind via C_{r+1,i} = i C_{r,i} + C_{r,i-1}.
inline BigNat stirling2(std::int64_t r, std::int64_t k)
{
    if (r < 0 || k < 0 || k > r) {
        return 0;
    }
    if (r <= kMemoCap) {
        return detail::stirling2_table().rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
    }
    std::vector<BigNat> row = detail::stirling2_table().rows[kMemoCap];
    for (std::int64_t rr = kMemoCap; rr < r; ++rr) {
        std::vector<BigNat> next(static_cast<std::size_t>(rr + 2), BigNat(0));
        for (std::int64_t i = 1; i <= rr + 1; ++i) {
            BigNat carry = i <= rr ? BigNat(i) * row[static_cast<std::size_t>(i)] : BigNat(0);
            next[static_cast<std::size_t>(i)] = carry + row[static_cast<std::size_t>(i - 1)];
        }
        row = std::move(next);
    }
    return row[static_cast<std::size_t>(k)];
}

inline WideReal to_wide(const BigNat &v)
{
    return WideReal(v);
}

inline WideReal to_wide(const Rational &v)
{
    return WideReal(boost::multiprecision::numerator(v)) / WideReal(boost::multiprecision::denominator(v));
}

// ---------------------------------------------------------------------------
// Log-domain reals

/// Sign and natural log of magnitude. Products of very large and very small
/// factors (binomial amplitudes at large M) stay finite until converted back.
class LogReal
{
public:
    constexpr LogReal() = default;

    static LogReal zero()
    {
        return LogReal{};
    }

    static LogReal from_log(double log_magnitude, int sign = 1)
    {
        LogReal out;
        out.sign_ = sign > 0 ? 1 : (sign < 0 ? -1 : 0);
        out.log_magnitude_ = out.sign_ == 0 ? 0.0 : log_magnitude;
        return out;
    }

    static LogReal from_double(double x)
    {
        if (x == 0.0) {
            return zero();
        }
        return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
    }

    int sign() const noexcept
    {
        return sign_;
    }

    bool is_zero() const noexcept
    {
        return sign_ == 0;
    }

    double log_magnitude() const noexcept
    {
        return log_magnitude_;
    }

    double to_double() const
    {
        return sign_ == 0 ? 0.0 : sign_ * std::exp(log_magnitude_);
    }

    LogReal sqrt() const
    {
        if (sign_ < 0) {
            throw DomainError("LogReal::sqrt of a negative value");
        }
        return from_log(0.5 * log_magnitude_, sign_);
    }

    LogReal pow(std::int64_t e) const
    {
        if (e == 0) {
            return from_log(0.0, 1);
        }
        if (sign_ == 0) {
            return zero();
        }
        const int s = (sign_ < 0 && (e % 2 != 0)) ? -1 : 1;
        return from_log(static_cast<double>(e) * log_magnitude_, s);
    }

    friend LogReal operator*(const LogReal &a, const LogReal &b)
    {
        if (a.sign_ == 0 || b.sign_ == 0) {
            return zero();
        }
        return from_log(a.log_magnitude_ + b.log_magnitude_, a.sign_ * b.sign_);
    }

    friend LogReal operator/(const LogReal &a, const LogReal &b)
    {
        if (b.sign_ == 0) {
            throw ZeroDenominatorError("LogReal division by zero");
        }
        if (a.sign_ == 0) {
            return zero();
        }
        return from_log(a.log_magnitude_ - b.log_magnitude_, a.sign_ * b.sign_);
    }

private:
    int sign_ = 0;
    double log_magnitude_ = 0.0;
};

inline LogReal log_factorial(std::int64_t n)
{
    if (n < 0) {
        throw DomainError("log_factorial: negative argument");
    }
    return LogReal::from_log(std::lgamma(static_cast<double>(n) + 1.0));
}

inline LogReal log_binomial(std::int64_t n, std::int64_t r)
{
    if (n < 0 || r < 0 || r > n) {
        return LogReal::zero();
    }
    return log_factorial(n) / (log_factorial(r) * log_factorial(n - r));
}

} // namespace hon

#endif
