#ifndef HON_CRITERIA_HPP
#define HON_CRITERIA_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <hon/combinatorics.hpp>
#include <hon/errors.hpp>
#include <hon/fock_states.hpp>
#include <hon/moments.hpp>

namespace hon
{

enum class Criterion {
    hoa_d,       // d(l) = <N^(l+1)> - <N>^(l+1)
    hoa_lee_R,   // R(l, m)
    hoa_ba_an_A, // A_l = R(l, 1)
    hosps_dh,    // d_h(n-1)
    hos_shm,     // normalized Hong-Mandel S_HM(n)
    hos_bg,      // S_HM(n) over a Brandt-Greenberg ladder
};

enum class EvaluationPath { generic_engine, closed_form };

inline constexpr int kMaxAntibunchingOrder = 10;
inline constexpr int kMaxMomentOrder = 12;

inline std::string_view to_string(Criterion c) noexcept
{
    switch (c) {
        case Criterion::hoa_d:
            return "hoa_d";
        case Criterion::hoa_lee_R:
            return "hoa_lee_R";
        case Criterion::hoa_ba_an_A:
            return "hoa_ba_an_A";
        case Criterion::hosps_dh:
            return "hosps_dh";
        case Criterion::hos_shm:
            return "hos_shm";
        case Criterion::hos_bg:
            return "hos_bg";
    }
    return "unknown";
}

inline std::string_view to_string(EvaluationPath p) noexcept
{
    return p == EvaluationPath::generic_engine ? "generic_engine" : "closed_form";
}

inline std::optional<Criterion> parse_criterion(std::string_view name) noexcept
{
    for (auto c : {Criterion::hoa_d, Criterion::hoa_lee_R, Criterion::hoa_ba_an_A, Criterion::hosps_dh,
                   Criterion::hos_shm, Criterion::hos_bg}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

struct CriterionResult {
    Criterion criterion = Criterion::hoa_d;
    int order = 0;
    std::optional<int> secondary_order; // m of R(l, m)
    double value = 0.0;
    bool nonclassical = false; // value < 0, strict
    EvaluationPath path = EvaluationPath::generic_engine;
};

inline CriterionResult make_result(Criterion c, int order, double value, EvaluationPath path = EvaluationPath::generic_engine,
                                   std::optional<int> secondary = std::nullopt)
{
    return CriterionResult{c, order, secondary, value, value < 0.0, path};
}

namespace detail
{

inline void check_antibunching_order(int l, const char *what)
{
    if (l < 1 || l > kMaxAntibunchingOrder) {
        throw UnsupportedOrderError(std::string(what) + ": order l=" + std::to_string(l) + " outside [1, " +
                                    std::to_string(kMaxAntibunchingOrder) + "]");
    }
}

inline void check_number_order(int n, const char *what)
{
    if (n < 2 || n > kMaxMomentOrder) {
        throw UnsupportedOrderError(std::string(what) + ": order n=" + std::to_string(n) + " outside [2, " +
                                    std::to_string(kMaxMomentOrder) + "]");
    }
}

inline void check_squeezing_order(int n, const char *what)
{
    if (n < 2 || n > kMaxMomentOrder || n % 2 != 0) {
        throw UnsupportedOrderError(std::string(what) + ": order n=" + std::to_string(n) +
                                    " unsupported (even n in [2, " + std::to_string(kMaxMomentOrder) + "])");
    }
}

inline WideReal factorial_moment_or_one(const State &state, int k)
{
    return k == 0 ? WideReal(1) : wide_factorial_moment(state, k);
}

// d_h(n-1) through d(k-1) = <N^(k)> - <N>^k:
//   sum_r sum_{k=1}^{r} S2(r,k) nCr (-1)^(n-r) d(k-1) <N>^{n-r}
template <typename FactorialMomentFn>
WideReal hosps_bridge_from(int n, const WideReal &mean, FactorialMomentFn &&factorial_moment)
{
    WideReal total = 0;
    for (int r = 1; r <= n; ++r) {
        WideReal inner = 0;
        for (int k = 1; k <= r; ++k) {
            const WideReal d_km1 = (k == 1) ? WideReal(0) : WideReal(factorial_moment(k) - pow(mean, k));
            inner += to_wide(stirling2(r, k)) * d_km1;
        }
        const WideReal term = to_wide(binomial(n, r)) * inner * pow(mean, n - r);
        total += ((n - r) % 2 == 0) ? term : WideReal(-term);
    }
    return total;
}

inline WideReal hong_mandel_normalized(const WideReal &central_x, int n)
{
    const WideReal baseline = to_wide(pochhammer_half(n / 2));
    return (central_x - baseline) / baseline;
}

} // namespace detail

/// l-th order antibunching, d(l) = <N^(l+1)> - <N>^(l+1).
inline CriterionResult hoa_d(const State &state, int l)
{
    detail::check_antibunching_order(l, "hoa_d");
    const WideReal mean = detail::wide_factorial_moment(state, 1);
    const WideReal value = detail::wide_factorial_moment(state, l + 1) - pow(mean, l + 1);
    return make_result(Criterion::hoa_d, l, static_cast<double>(value));
}

/// R(l, m) = <N^(l+1)><N^(m-1)> / (<N^(l)><N^(m)>) - 1, with <N^(0)> = 1.
inline CriterionResult hoa_lee_R(const State &state, int l, int m)
{
    detail::check_antibunching_order(l, "hoa_lee_R");
    if (m < 1 || m > l) {
        throw DomainError("hoa_lee_R: need 1 <= m <= l");
    }
    const WideReal den = detail::factorial_moment_or_one(state, l) * detail::factorial_moment_or_one(state, m);
    if (den == 0) {
        throw ZeroDenominatorError("hoa_lee_R: <N^(" + std::to_string(l) + ")><N^(" + std::to_string(m) +
                                   ")> vanishes");
    }
    const WideReal num =
        detail::factorial_moment_or_one(state, l + 1) * detail::factorial_moment_or_one(state, m - 1);
    return make_result(Criterion::hoa_lee_R, l, static_cast<double>(num / den - 1), EvaluationPath::generic_engine,
                       m);
}

/// A_l = <N^(l+1)> / (<N^(l)><N>) - 1.
inline CriterionResult hoa_ba_an_A(const State &state, int l)
{
    detail::check_antibunching_order(l, "hoa_ba_an_A");
    const WideReal den = detail::wide_factorial_moment(state, l) * detail::wide_factorial_moment(state, 1);
    if (den == 0) {
        throw ZeroDenominatorError("hoa_ba_an_A: <N^(" + std::to_string(l) + ")><N> vanishes");
    }
    const WideReal value = detail::wide_factorial_moment(state, l + 1) / den - 1;
    return make_result(Criterion::hoa_ba_an_A, l, static_cast<double>(value));
}

namespace detail
{

inline WideReal wide_hosps_dh(const State &state, int n)
{
    const WideReal mean = wide_factorial_moment(state, 1);
    return wide_central_moment_number(state, n) - wide_poisson_central_moment_number(mean, n);
}

} // namespace detail

/// d_h(n-1): n-th central moment of N minus its Poisson value at the same
/// mean. Reported order is n - 1.
inline CriterionResult hosps_dh(const State &state, int n)
{
    detail::check_number_order(n, "hosps_dh");
    return make_result(Criterion::hosps_dh, n - 1, static_cast<double>(detail::wide_hosps_dh(state, n)));
}

/// |d_h(n-1) via the antibunching bridge - d_h(n-1) direct|.
inline double hosps_bridge_check(const State &state, int n)
{
    detail::check_number_order(n, "hosps_bridge_check");
    const WideReal mean = detail::wide_factorial_moment(state, 1);
    const WideReal bridge =
        detail::hosps_bridge_from(n, mean, [&](int k) { return detail::wide_factorial_moment(state, k); });
    return static_cast<double>(abs(bridge - detail::wide_hosps_dh(state, n)));
}

/// S_HM(n) = (<(Delta X)^n> - (1/2)_{n/2}) / (1/2)_{n/2}, n even.
inline CriterionResult hos_shm(const State &state, int n)
{
    detail::check_squeezing_order(n, "hos_shm");
    const WideReal central = detail::wide_central_moment_quadrature(state, n, QuadratureConvention::X_root2);
    return make_result(Criterion::hos_shm, n, static_cast<double>(detail::hong_mandel_normalized(central, n)));
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail
{

inline void check_binomial_params(int M, double p)
{
    if (M < 1) {
        throw DomainError("closed_form_binomial: M must be >= 1");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("closed_form_binomial: p must lie in [0, 1]");
    }
}

// B_s^{M} = sqrt(MC_s p^s (1-p)^{M-s})
inline WideReal binomial_amplitude(int M, int s, const WideReal &p)
{
    if (s < 0 || s > M) {
        return 0;
    }
    return sqrt(to_wide(binomial(M, s)) * pow(p, s) * pow(WideReal(1 - p), M - s));
}

} // namespace detail

/// Binomial-state closed forms for hoa_d (order = l), hosps_dh (order = n)
/// and hos_shm (order = n).
inline double closed_form_binomial(Criterion criterion, int M, double p, int order)
{
    detail::check_binomial_params(M, p);
    const WideReal wp = p;
    const WideReal mean = M * wp;
    // M!/(M-k)! p^k, zero once k > M
    auto factorial_moment = [&](int k) { return to_wide(falling_factorial(M, k)) * pow(wp, k); };

    switch (criterion) {
        case Criterion::hoa_d: {
            detail::check_antibunching_order(order, "closed_form_binomial");
            return static_cast<double>(factorial_moment(order + 1) - pow(mean, order + 1));
        }
        case Criterion::hosps_dh: {
            detail::check_number_order(order, "closed_form_binomial");
            return static_cast<double>(detail::hosps_bridge_from(order, mean, factorial_moment));
        }
        case Criterion::hos_shm: {
            detail::check_squeezing_order(order, "closed_form_binomial");
            // <a^dagger + a> = 2 sqrt(Mp) sum_s B_s^M B_s^{M-1}
            WideReal overlap = 0;
            for (int s = 0; s <= M - 1; ++s) {
                overlap += detail::binomial_amplitude(M, s, wp) * detail::binomial_amplitude(M - 1, s, wp);
            }
            const WideReal mean_e = 2 * sqrt(mean) * overlap;
            // <a^dagger^k a^q> = sqrt(M!^2 p^{k+q} / ((M-k)!(M-q)!)) sum_s B_s^{M-k} B_s^{M-q}
            auto moment = [&](int k, int q) {
                WideComplex out;
                if (k > M || q > M) {
                    return out;
                }
                const WideReal pref = sqrt(to_wide(falling_factorial(M, k)) * to_wide(falling_factorial(M, q)) *
                                           pow(wp, k + q));
                WideReal sum = 0;
                for (int s = 0; s <= M - std::max(k, q); ++s) {
                    sum += detail::binomial_amplitude(M - k, s, wp) * detail::binomial_amplitude(M - q, s, wp);
                }
                out.re = pref * sum;
                return out;
            };
            const WideReal central = quadrature_central_moment_from(order, mean_e, moment) / pow(WideReal(2), order / 2);
            return static_cast<double>(detail::hong_mandel_normalized(central, order));
        }
        default:
            throw DomainError("closed_form_binomial: no closed form for criterion " + std::string(to_string(criterion)));
    }
}

enum class NonlinearFamily { nlvss, nless };

/// NLVSS/NLESS closed forms by direct series summation over n'. The default
/// number of terms matches the state generators' truncation rule.
inline double closed_form_nonlinear(Criterion criterion, NonlinearFamily family, double r, int order,
                                    std::optional<int> truncation = std::nullopt)
{
    const int parity = family == NonlinearFamily::nless ? 1 : 0;
    const int default_trunc = nonlinear_default_truncation(r, parity);
    const int n_max = truncation.value_or(default_trunc);
    if (n_max < default_trunc) {
        throw TruncationError("closed_form_nonlinear: truncation drops a series tail above tolerance");
    }
    const int terms = (n_max - parity) / 2 + 1;

    const WideReal x = std::tanh(r) / 2.0;
    // w(n') = (tanh r / 2)^{2n'} / (n'!)^2; |N|^2 = 1 / sum w
    std::vector<WideReal> w(static_cast<std::size_t>(terms));
    WideReal z = 0;
    for (int k = 0; k < terms; ++k) {
        w[static_cast<std::size_t>(k)] = pow(x, 2 * k) / pow(to_wide(factorial(k)), 2);
        z += w[static_cast<std::size_t>(k)];
    }
    const WideReal norm2 = 1 / z;
    auto level = [parity](int np) { return 2 * np + parity; };

    WideReal mean = 0;
    for (int k = 0; k < terms; ++k) {
        mean += norm2 * level(k) * w[static_cast<std::size_t>(k)];
    }
    auto factorial_moment = [&](int j) {
        WideReal s = 0;
        for (int k = 0; k < terms; ++k) {
            s += to_wide(falling_factorial(level(k), j)) * w[static_cast<std::size_t>(k)];
        }
        return WideReal(norm2 * s);
    };

    switch (criterion) {
        case Criterion::hoa_d: {
            detail::check_antibunching_order(order, "closed_form_nonlinear");
            return static_cast<double>(factorial_moment(order + 1) - pow(mean, order + 1));
        }
        case Criterion::hosps_dh: {
            detail::check_number_order(order, "closed_form_nonlinear");
            return static_cast<double>(detail::hosps_bridge_from(order, mean, factorial_moment));
        }
        case Criterion::hos_shm: {
            detail::check_squeezing_order(order, "closed_form_nonlinear");
            // <a^dagger^k a^q>: bra |2n'+e>, ket |2n''+e> with n'' = n' + (q-k)/2,
            // amplitudes |N| (-x)^{n'}/n'!, and both indices at least the power applied.
            auto moment = [&](int k, int q) {
                WideComplex out;
                if ((q - k) % 2 != 0) {
                    return out;
                }
                const int shift = (q - k) / 2;
                for (int np = 0; np < terms; ++np) {
                    const int npp = np + shift;
                    if (npp < 0 || npp >= terms || level(np) < k) {
                        continue;
                    }
                    const int s = level(np) - k;
                    const WideReal radical = sqrt(to_wide(factorial(level(np))) * to_wide(factorial(level(npp))));
                    const WideReal amp = pow(x, np + npp) / (to_wide(factorial(np)) * to_wide(factorial(npp)));
                    const WideReal term = radical / to_wide(factorial(s)) * amp;
                    out.re += ((np + npp) % 2 == 0) ? term : WideReal(-term);
                }
                out.re *= norm2;
                return out;
            };
            // Parity support makes <a^dagger + a> vanish.
            const WideReal central = quadrature_central_moment_from(order, WideReal(0), moment) /
                                     pow(WideReal(2), order / 2);
            return static_cast<double>(detail::hong_mandel_normalized(central, order));
        }
        default:
            throw DomainError("closed_form_nonlinear: no closed form for criterion " +
                              std::string(to_string(criterion)));
    }
}

} // namespace hon

#endif
