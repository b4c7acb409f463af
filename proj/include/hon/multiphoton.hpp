#ifndef HON_MULTIPHOTON_HPP
#define HON_MULTIPHOTON_HPP

// Brandt-Greenberg k-photon ladder operators.
//
// A_k |n> = sqrt(floor(n/k)) |n-k>,  A_k^dagger |n> = sqrt(floor(n/k) + 1) |n+k>.
// This is the action for which [A_k, A_k^dagger] = 1 holds on every Fock
// state; within each residue class n mod k it is an ordinary boson ladder
// on the rungs n = k*m + c.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <hon/combinatorics.hpp>
#include <hon/criteria.hpp>
#include <hon/errors.hpp>
#include <hon/fock_states.hpp>
#include <hon/moments.hpp>

namespace hon
{

class BGLadder
{
public:
    explicit BGLadder(int k) : k_(k)
    {
        if (k < 1) {
            throw DomainError("BGLadder: k must be >= 1");
        }
    }

    int k() const noexcept
    {
        return k_;
    }

    /// Squared amplitude of A_k on |n>: floor(n/k), zero below the first rung.
    std::int64_t lower_weight(int n) const noexcept
    {
        return n < 0 ? 0 : n / k_;
    }

    /// Squared amplitude of A_k^dagger on |n>.
    std::int64_t raise_weight(int n) const noexcept
    {
        return n / k_ + 1;
    }

private:
    int k_;
};

using FockAmplitudes = std::vector<Complex>;

inline FockAmplitudes bg_lower(const BGLadder &ladder, const FockAmplitudes &v)
{
    FockAmplitudes out(v.size(), Complex{});
    const int k = ladder.k();
    for (int n = k; n < static_cast<int>(v.size()); ++n) {
        out[static_cast<std::size_t>(n - k)] +=
            std::sqrt(static_cast<double>(ladder.lower_weight(n))) * v[static_cast<std::size_t>(n)];
    }
    return out;
}

inline FockAmplitudes bg_lower(const BGLadder &ladder, const FockExpansion &psi)
{
    return bg_lower(ladder, psi.amplitudes());
}

/// Raises within the same truncation; a populated level that would land
/// above n_max is an error rather than being clipped.
inline FockAmplitudes bg_raise(const BGLadder &ladder, const FockAmplitudes &v)
{
    FockAmplitudes out(v.size(), Complex{});
    const int k = ladder.k();
    const int n_max = static_cast<int>(v.size()) - 1;
    for (int n = 0; n <= n_max; ++n) {
        const Complex c = v[static_cast<std::size_t>(n)];
        if (c == Complex{}) {
            continue;
        }
        if (n + k > n_max) {
            throw TruncationError("bg_raise: level " + std::to_string(n) + " + " + std::to_string(k) +
                                  " exceeds truncation " + std::to_string(n_max));
        }
        out[static_cast<std::size_t>(n + k)] += std::sqrt(static_cast<double>(ladder.raise_weight(n))) * c;
    }
    return out;
}

inline FockAmplitudes bg_raise(const BGLadder &ladder, const FockExpansion &psi)
{
    return bg_raise(ladder, psi.amplitudes());
}

namespace detail
{

inline std::int64_t exact_isqrt(std::int64_t v)
{
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    while (r * r > v) {
        --r;
    }
    while ((r + 1) * (r + 1) <= v) {
        ++r;
    }
    if (r * r != v) {
        throw VerificationError("ladder amplitudes do not combine to an integer");
    }
    return r;
}

} // namespace detail

/// <n| [A_k, A_k^dagger] |n> from the integer squared amplitudes. A A^dagger
/// passes through |n+k> and A^dagger A through |n-k>; each round trip is
/// sqrt(w_out) sqrt(w_back), which must be an exact integer.
inline std::int64_t bg_commutator_diagonal(const BGLadder &ladder, int n)
{
    if (n < 0) {
        throw DomainError("bg_commutator_diagonal: negative Fock index");
    }
    const int k = ladder.k();
    const std::int64_t up_down = detail::exact_isqrt(ladder.raise_weight(n) * ladder.lower_weight(n + k));
    const std::int64_t down_up = n >= k ? detail::exact_isqrt(ladder.lower_weight(n) * ladder.raise_weight(n - k)) : 0;
    return up_down - down_up;
}

namespace detail
{

using WideVector = std::vector<WideComplex>;

inline WideVector to_wide_vector(const FockExpansion &psi)
{
    WideVector out(psi.amplitudes().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].re = psi.amplitudes()[i].real();
        out[i].im = psi.amplitudes()[i].imag();
    }
    return out;
}

inline WideVector wide_lower(const BGLadder &ladder, const WideVector &v)
{
    WideVector out(v.size());
    const int k = ladder.k();
    for (int n = k; n < static_cast<int>(v.size()); ++n) {
        const WideReal amp = sqrt(WideReal(ladder.lower_weight(n)));
        out[static_cast<std::size_t>(n - k)] += v[static_cast<std::size_t>(n)] * amp;
    }
    return out;
}

inline WideComplex wide_inner(const WideVector &a, const WideVector &b)
{
    WideComplex out;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        out.re += a[i].re * b[i].re + a[i].im * b[i].im;
        out.im += a[i].re * b[i].im - a[i].im * b[i].re;
    }
    return out;
}

// Squared norm of A^m |n>.
inline WideReal wide_lowered_norm(const BGLadder &ladder, int n, int m)
{
    WideReal w = 1;
    for (int step = 0; step < m; ++step) {
        const int level = n - step * ladder.k();
        if (level < ladder.k()) {
            return 0;
        }
        w *= ladder.lower_weight(level);
    }
    return w;
}

// <A^dagger^j A^m> = <A^j psi | A^m psi>; lowering only, so no headroom is needed.
struct BGMoments {
    BGLadder ladder;
    const State &state;
    std::vector<WideVector> lowered; // lowered[i] = A^i psi (pure states only)

    BGMoments(BGLadder l, const State &s) : ladder(l), state(s) {}

    const WideVector &power(int i)
    {
        const auto &psi = std::get<FockExpansion>(state);
        if (lowered.empty()) {
            lowered.push_back(to_wide_vector(psi));
        }
        while (static_cast<int>(lowered.size()) <= i) {
            lowered.push_back(wide_lower(ladder, lowered.back()));
        }
        return lowered[static_cast<std::size_t>(i)];
    }

    WideComplex operator()(int j, int m)
    {
        if (const auto *rho = std::get_if<DiagonalMixture>(&state)) {
            WideComplex out;
            if (j != m) {
                return out;
            }
            for (const auto &[n, w] : rho->weights()) {
                out.re += WideReal(w) * wide_lowered_norm(ladder, n, m);
            }
            return out;
        }
        power(std::max(j, m)); // fill the cache first; power() may reallocate it
        return wide_inner(power(j), power(m));
    }
};

} // namespace detail

/// <A_k^dagger^j A_k^m>.
inline Complex bg_moment(const BGLadder &ladder, const State &state, int j, int m)
{
    if (j < 0 || m < 0) {
        throw DomainError("bg_moment: powers must be >= 0");
    }
    detail::BGMoments moments(ladder, state);
    return moments(j, m).to_complex();
}

/// (<X_1k>, <X_2k>) with X_1k = A_k + A_k^dagger and X_2k = A_k - A_k^dagger.
inline std::pair<Complex, Complex> bg_quadrature_expectations(const BGLadder &ladder, const State &state)
{
    const Complex lower = bg_moment(ladder, state, 0, 1);
    const Complex raise = std::conj(lower);
    return {lower + raise, lower - raise};
}

inline FockExpansion make_k_photon_coherent(int k, Complex alpha, std::optional<int> truncation = std::nullopt)
{
    const BGLadder ladder(k);
    const double mag = std::abs(alpha);
    const int rungs = default_coherent_truncation(mag);
    const int needed = ladder.k() * rungs;
    const int n_max = truncation.value_or(needed);
    if (n_max < needed) {
        throw TruncationError("make_k_photon_coherent: truncation " + std::to_string(n_max) + " below required " +
                              std::to_string(needed));
    }
    std::vector<Complex> amps(static_cast<std::size_t>(n_max) + 1, Complex{});
    Complex c = std::exp(-0.5 * mag * mag);
    for (int m = 0; m * k <= n_max; ++m) {
        if (m > 0) {
            c *= alpha / std::sqrt(static_cast<double>(m));
        }
        amps[static_cast<std::size_t>(m * k)] = c;
    }
    return FockExpansion(std::move(amps));
}

/// Hong-Mandel S_HM(n) with a, a^dagger replaced by A_k, A_k^dagger.
inline CriterionResult hos_shm_bg(const BGLadder &ladder, const State &state, int n)
{
    detail::check_squeezing_order(n, "hos_shm_bg");
    detail::BGMoments moments(ladder, state);
    const WideReal mean = 2 * moments(0, 1).re;
    const WideReal central = quadrature_central_moment_from(n, mean, moments) / pow(WideReal(2), n / 2);
    return make_result(Criterion::hos_bg, n, static_cast<double>(detail::hong_mandel_normalized(central, n)));
}

} // namespace hon

#endif
