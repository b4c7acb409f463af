#ifndef HON_MOMENTS_HPP
#define HON_MOMENTS_HPP

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <variant>

#include <hon/combinatorics.hpp>
#include <hon/errors.hpp>
#include <hon/fock_states.hpp>

namespace hon
{

struct MomentQuery {
    int creation = 0;     // j in a^dagger^j a^k
    int annihilation = 0; // k
};

enum class QuadratureConvention {
    E_unit,  // E = a^dagger + a
    X_root2, // X = (a + a^dagger)/sqrt(2)
};

struct WideComplex {
    WideReal re = 0;
    WideReal im = 0;

    WideComplex &operator+=(const WideComplex &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }

    friend WideComplex operator*(const WideComplex &a, const WideReal &s)
    {
        return {a.re * s, a.im * s};
    }

    WideComplex conj() const
    {
        return {re, -im};
    }

    Complex to_complex() const
    {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

namespace detail
{

inline void check_moment_query(const MomentQuery &q)
{
    if (q.creation < 0 || q.annihilation < 0) {
        throw DomainError("moment query powers must be >= 0");
    }
}

// m!/(m-j)! as a wide real; zero when j > m.
inline WideReal wide_falling(int m, int j)
{
    if (j > m) {
        return 0;
    }
    WideReal out = 1;
    for (int i = 0; i < j; ++i) {
        out *= (m - i);
    }
    return out;
}

// <a^dagger^j a^k> from first principles: a^k|s+k> = sqrt((s+k)!/s!)|s>.
inline WideComplex wide_moment(const FockExpansion &psi, int j, int k)
{
    WideComplex sum;
    const int top = psi.n_max() - std::max(j, k);
    for (int s = 0; s <= top; ++s) {
        const Complex bra = std::conj(psi.amplitude(s + j));
        const Complex ket = psi.amplitude(s + k);
        if (bra == Complex{} || ket == Complex{}) {
            continue;
        }
        const WideReal br = bra.real(), bi = bra.imag(), kr = ket.real(), ki = ket.imag();
        const WideReal factor = sqrt(wide_falling(s + j, j) * wide_falling(s + k, k));
        sum.re += (br * kr - bi * ki) * factor;
        sum.im += (br * ki + bi * kr) * factor;
    }
    return sum;
}

inline WideComplex wide_moment(const DiagonalMixture &rho, int j, int k)
{
    WideComplex sum;
    if (j != k) {
        return sum;
    }
    for (const auto &[m, w] : rho.weights()) {
        sum.re += WideReal(w) * wide_falling(m, k);
    }
    return sum;
}

inline WideReal wide_mean_e(const FockExpansion &psi)
{
    // <a^dagger + a> = 2 Re sum_m sqrt(m+1) C_m^* C_{m+1}
    WideReal sum = 0;
    for (int m = 0; m < psi.n_max(); ++m) {
        const Complex a = std::conj(psi.amplitude(m));
        const Complex b = psi.amplitude(m + 1);
        const WideReal re = WideReal(a.real()) * b.real() - WideReal(a.imag()) * b.imag();
        sum += 2 * re * sqrt(WideReal(m + 1));
    }
    return sum;
}

inline WideReal wide_mean_e(const DiagonalMixture &)
{
    return 0;
}

inline WideReal wide_factorial_moment(const State &state, int k)
{
    return std::visit([k](const auto &s) { return wide_moment(s, k, k).re; }, state);
}

// sum_{r=0}^{n} nCr (-1)^(n-r) <N^r> <N>^{n-r}, with <N^0> = 1 and
// <N^r> = sum_k S2(r,k) <N^(k)>. The sign (-1)^(n-r) gives <(N - <N>)^n>;
// (-1)^r would give <(<N> - N)^n>, which differs for odd n.
template <typename FactorialMomentFn>
WideReal number_central_moment_from(int n, const WideReal &mean, FactorialMomentFn &&factorial_moment)
{
    WideReal total = 0;
    for (int r = 0; r <= n; ++r) {
        WideReal raw = 0;
        if (r == 0) {
            raw = 1;
        } else {
            for (int k = 1; k <= r; ++k) {
                raw += to_wide(stirling2(r, k)) * factorial_moment(k);
            }
        }
        const WideReal term = to_wide(binomial(n, r)) * raw * pow(mean, n - r);
        total += ((n - r) % 2 == 0) ? term : WideReal(-term);
    }
    return total;
}

} // namespace detail

/// Hong-Mandel triple sum for <(Delta E)^n>:
///   sum_r sum_i sum_k (-1)^r t_{2i} (r-2i)C_k nC_r rC_{2i} <E>^{n-r} <a^dagger^k a^{r-2i-k}>
/// where `moment(j, k)` returns <L^dagger^j L^k> (as WideComplex) for the
/// ladder L in use and `mean_e` is <L^dagger + L>. Only even n is supported.
template <typename MomentFn>
WideReal quadrature_central_moment_from(int n, const WideReal &mean_e, MomentFn &&moment)
{
    if (n < 2 || n % 2 != 0) {
        throw UnsupportedOrderError("quadrature central moment: order " + std::to_string(n) +
                                    " unsupported (even n >= 2 only)");
    }
    // Moments are reused across (r, i); cache by (j, k).
    std::map<std::pair<int, int>, WideReal> cache;
    auto sym = [&](int j, int k) -> const WideReal & {
        auto it = cache.find({j, k});
        if (it == cache.end()) {
            it = cache.emplace(std::make_pair(j, k), moment(j, k).re).first;
        }
        return it->second;
    };
    WideReal total = 0;
    for (int r = 0; r <= n; ++r) {
        const WideReal outer = to_wide(binomial(n, r)) * pow(mean_e, n - r);
        for (int i = 0; 2 * i <= r; ++i) {
            const int q = r - 2 * i;
            const WideReal ti = to_wide(hong_mandel_coefficient(i) * binomial(r, 2 * i));
            WideReal inner = 0;
            // The k and q-k terms are complex conjugates; summing real parts is exact.
            for (int k = 0; k <= q; ++k) {
                inner += to_wide(binomial(q, k)) * sym(k, q - k);
            }
            const WideReal term = outer * ti * inner;
            total += (r % 2 == 0) ? term : WideReal(-term);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Public interface (double precision at the boundary)

inline Complex moment_normal(const State &state, MomentQuery q)
{
    detail::check_moment_query(q);
    return std::visit([&](const auto &s) { return detail::wide_moment(s, q.creation, q.annihilation).to_complex(); },
                      state);
}

/// <N^(k)> = <a^dagger^k a^k>.
inline double factorial_moment(const State &state, int k)
{
    if (k < 1) {
        throw DomainError("factorial_moment: k must be >= 1");
    }
    return static_cast<double>(detail::wide_factorial_moment(state, k));
}

inline double mean_photon_number(const State &state)
{
    return factorial_moment(state, 1);
}

inline double mean_quadrature(const State &state, QuadratureConvention conv)
{
    const WideReal e = std::visit([](const auto &s) { return detail::wide_mean_e(s); }, state);
    return conv == QuadratureConvention::E_unit ? static_cast<double>(e) : static_cast<double>(e / sqrt(WideReal(2)));
}

namespace detail
{

inline WideReal wide_central_moment_number(const State &state, int n)
{
    if (n < 1) {
        throw DomainError("central_moment_number: n must be >= 1");
    }
    const WideReal mean = wide_factorial_moment(state, 1);
    return number_central_moment_from(n, mean, [&](int k) { return wide_factorial_moment(state, k); });
}

inline WideReal wide_poisson_central_moment_number(const WideReal &mean, int n)
{
    if (n < 1) {
        throw DomainError("poisson_central_moment_number: n must be >= 1");
    }
    if (mean < 0) {
        throw DomainError("poisson_central_moment_number: mean must be >= 0");
    }
    // Poisson factorial moments are mean^k.
    return number_central_moment_from(n, mean, [&](int k) { return WideReal(pow(mean, k)); });
}

inline WideReal wide_central_moment_quadrature(const State &state, int n, QuadratureConvention conv)
{
    const WideReal value = std::visit(
        [n](const auto &s) {
            return quadrature_central_moment_from(n, wide_mean_e(s),
                                                  [&s](int j, int k) { return wide_moment(s, j, k); });
        },
        state);
    if (conv == QuadratureConvention::X_root2) {
        return value / pow(WideReal(2), n / 2);
    }
    return value;
}

} // namespace detail

/// <(Delta N)^n> assembled from factorial moments through S2(r, k).
inline double central_moment_number(const State &state, int n)
{
    return static_cast<double>(detail::wide_central_moment_number(state, n));
}

/// <(Delta N)^n> of a Poisson distribution with the given mean.
inline double poisson_central_moment_number(double mean, int n)
{
    return static_cast<double>(detail::wide_poisson_central_moment_number(WideReal(mean), n));
}

/// <(Delta E)^n> or <(Delta X)^n> for even n via the normal-ordered triple sum.
inline double central_moment_quadrature(const State &state, int n, QuadratureConvention conv)
{
    return static_cast<double>(detail::wide_central_moment_quadrature(state, n, conv));
}

} // namespace hon

#endif
