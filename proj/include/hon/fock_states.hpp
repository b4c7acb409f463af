#ifndef HON_FOCK_STATES_HPP
#define HON_FOCK_STATES_HPP

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <hon/combinatorics.hpp>
#include <hon/errors.hpp>

namespace hon
{

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kMixtureTolerance = 1e-12;
inline constexpr double kSeriesTailTolerance = 1e-16;
inline constexpr int kMaxDefaultTruncation = 400;

/// Pure state sum_j C_j |j> truncated at n_max = size - 1.
class FockExpansion
{
public:
    /// Takes amplitudes that are already normalized (to kNormTolerance).
    explicit FockExpansion(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes))
    {
        if (amps_.empty()) {
            throw DomainError("FockExpansion: empty amplitude list");
        }
        const double norm = norm_squared();
        if (!std::isfinite(norm) || std::fabs(norm - 1.0) > kNormTolerance) {
            throw DomainError("FockExpansion: amplitudes not normalized (sum |C|^2 = " + std::to_string(norm) + ")");
        }
    }

    /// Rescales arbitrary (nonzero) amplitudes to unit norm.
    static FockExpansion normalized(std::vector<Complex> amplitudes)
    {
        double norm = 0.0;
        for (const auto &c : amplitudes) {
            norm += std::norm(c);
        }
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw DomainError("FockExpansion: amplitudes have zero or non-finite norm");
        }
        const double scale = 1.0 / std::sqrt(norm);
        for (auto &c : amplitudes) {
            c *= scale;
        }
        return FockExpansion(std::move(amplitudes));
    }

    static FockExpansion number_state(int n)
    {
        if (n < 0) {
            throw DomainError("number_state: negative index");
        }
        std::vector<Complex> amps(static_cast<std::size_t>(n) + 1, Complex{});
        amps.back() = 1.0;
        return FockExpansion(std::move(amps));
    }

    int n_max() const noexcept
    {
        return static_cast<int>(amps_.size()) - 1;
    }

    /// C_n, zero above the truncation.
    Complex amplitude(int n) const noexcept
    {
        return (n < 0 || n > n_max()) ? Complex{} : amps_[static_cast<std::size_t>(n)];
    }

    const std::vector<Complex> &amplitudes() const noexcept
    {
        return amps_;
    }

    double norm_squared() const noexcept
    {
        double s = 0.0;
        for (const auto &c : amps_) {
            s += std::norm(c);
        }
        return s;
    }

private:
    std::vector<Complex> amps_;
};

/// Fock-diagonal density matrix sum_m w_m |m><m|.
class DiagonalMixture
{
public:
    explicit DiagonalMixture(std::map<int, double> weights) : weights_(std::move(weights))
    {
        double total = 0.0;
        for (const auto &[n, w] : weights_) {
            if (n < 0 || !(w >= 0.0)) {
                throw DomainError("DiagonalMixture: negative index or weight");
            }
            total += w;
        }
        if (std::fabs(total - 1.0) > kMixtureTolerance) {
            throw DomainError("DiagonalMixture: weights do not sum to 1");
        }
    }

    const std::map<int, double> &weights() const noexcept
    {
        return weights_;
    }

    int n_max() const noexcept
    {
        return weights_.empty() ? 0 : weights_.rbegin()->first;
    }

private:
    std::map<int, double> weights_;
};

using State = std::variant<FockExpansion, DiagonalMixture>;

/// P(n) for n = 0..n_max.
inline std::vector<double> photon_distribution(const FockExpansion &psi)
{
    std::vector<double> out;
    out.reserve(psi.amplitudes().size());
    for (const auto &c : psi.amplitudes()) {
        out.push_back(std::norm(c));
    }
    return out;
}

inline std::vector<double> photon_distribution(const DiagonalMixture &rho)
{
    std::vector<double> out(static_cast<std::size_t>(rho.n_max()) + 1, 0.0);
    for (const auto &[n, w] : rho.weights()) {
        out[static_cast<std::size_t>(n)] = w;
    }
    return out;
}

inline std::vector<double> photon_distribution(const State &state)
{
    return std::visit([](const auto &s) { return photon_distribution(s); }, state);
}

// ---------------------------------------------------------------------------
// Generators

inline FockExpansion make_binomial(int M, double p)
{
    if (M < 1) {
        throw DomainError("make_binomial: M must be >= 1");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("make_binomial: p must lie in [0, 1]");
    }
    const LogReal lp = LogReal::from_double(p);
    const LogReal lq = LogReal::from_double(1.0 - p);
    std::vector<Complex> amps(static_cast<std::size_t>(M) + 1);
    for (int n = 0; n <= M; ++n) {
        // Exact binomial while it fits a double, lgamma beyond.
        const double c = binomial(M, n).convert_to<double>();
        const LogReal lc = std::isfinite(c) ? LogReal::from_double(c) : log_binomial(M, n);
        amps[static_cast<std::size_t>(n)] = (lc * lp.pow(n) * lq.pow(M - n)).sqrt().to_double();
    }
    return FockExpansion(std::move(amps));
}

inline int default_coherent_truncation(double abs_alpha)
{
    return static_cast<int>(std::ceil(abs_alpha * abs_alpha + 40.0 * abs_alpha + 20.0));
}

inline FockExpansion make_coherent(Complex alpha, std::optional<int> truncation = std::nullopt)
{
    const double mag = std::abs(alpha);
    const int needed = default_coherent_truncation(mag);
    const int n_max = truncation.value_or(needed);
    if (n_max < needed) {
        throw TruncationError("make_coherent: truncation " + std::to_string(n_max) + " below required " +
                              std::to_string(needed));
    }
    // Magnitudes carried at WideReal precision and rounded once, so the
    // photon distribution is Poissonian to the last bit.
    std::vector<Complex> amps(static_cast<std::size_t>(n_max) + 1);
    const double phase = std::arg(alpha);
    const WideReal wmag = mag;
    WideReal c = exp(-wmag * wmag / 2);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            c *= wmag / sqrt(WideReal(n));
        }
        amps[static_cast<std::size_t>(n)] = std::polar(static_cast<double>(c), n * phase);
    }
    return FockExpansion(std::move(amps));
}

/// Normalized Fock-diagonal mixture; duplicate indices are merged.
inline DiagonalMixture make_diagonal_mixture(const std::vector<std::pair<int, double>> &entries)
{
    std::map<int, double> merged;
    double total = 0.0;
    for (const auto &[n, w] : entries) {
        if (n < 0) {
            throw DomainError("make_diagonal_mixture: negative Fock index");
        }
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DomainError("make_diagonal_mixture: weights must be finite and >= 0");
        }
        merged[n] += w;
        total += w;
    }
    if (!(total > 0.0)) {
        throw DomainError("make_diagonal_mixture: all weights are zero");
    }
    for (auto it = merged.begin(); it != merged.end();) {
        if (it->second == 0.0) {
            it = merged.erase(it);
        } else {
            it->second /= total;
            ++it;
        }
    }
    return DiagonalMixture(std::move(merged));
}

// ---------------------------------------------------------------------------
// Nonlinear squeezed states with f(n) = sqrt(n)
//
// With [f(n)]! = f(1)...f(n) = sqrt(n!) the amplitude of |2n'+e> reduces to
// N (-tanh r / 2)^n' / n'!, the same for the vacuum (e = 0) and first-excited
// (e = 1) families, and |N|^-2 = sum_n' (tanh r / 2)^{2n'} / (n'!)^2.

namespace detail
{

inline void check_squeeze(double r)
{
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw DomainError("nonlinear squeezed state: r must be finite and >= 0");
    }
}

// x^{2n'}/(n'!)^2 for n' = 0..count-1.
inline std::vector<double> nonlinear_weights(double r, int count)
{
    const double x = std::tanh(r) / 2.0;
    std::vector<double> w(static_cast<std::size_t>(count));
    double t = 1.0;
    for (int k = 0; k < count; ++k) {
        if (k > 0) {
            t *= (x / k) * (x / k);
        }
        w[static_cast<std::size_t>(k)] = t;
    }
    return w;
}

} // namespace detail

/// Number of retained n' terms for the default rule: stop once the next
/// amplitude is below kSeriesTailTolerance relative to the partial norm, so
/// both the dropped weight and every dropped amplitude are negligible.
inline int nonlinear_default_terms(double r)
{
    detail::check_squeeze(r);
    const double x = std::tanh(r) / 2.0;
    const int cap = kMaxDefaultTruncation / 2;
    double sum = 1.0;
    double t = 1.0;
    for (int k = 1; k <= cap; ++k) {
        t *= (x / k) * (x / k);
        if (t < kSeriesTailTolerance * kSeriesTailTolerance * sum) {
            return k;
        }
        sum += t;
    }
    return cap;
}

/// Default Fock truncation: parity 0 for NLVSS, 1 for NLESS.
inline int nonlinear_default_truncation(double r, int parity)
{
    return 2 * (nonlinear_default_terms(r) - 1) + parity;
}

namespace detail
{

inline FockExpansion make_nonlinear(double r, std::optional<int> truncation, int parity, const char *name)
{
    check_squeeze(r);
    const int default_trunc = nonlinear_default_truncation(r, parity);
    const int n_max = truncation.value_or(default_trunc);
    if (n_max < default_trunc) {
        throw TruncationError(std::string(name) + ": truncation " + std::to_string(n_max) +
                              " drops a series tail above tolerance (need >= " + std::to_string(default_trunc) + ")");
    }
    const int terms = (n_max - parity) / 2 + 1;
    const std::vector<double> w = nonlinear_weights(r, terms);
    WideReal z = 0;
    for (double v : w) {
        z += v;
    }
    const double norm = static_cast<double>(1 / sqrt(z));
    const double x = std::tanh(r) / 2.0;
    std::vector<Complex> amps(static_cast<std::size_t>(n_max) + 1, Complex{});
    double t = 1.0; // (-x)^n'/n'!
    for (int k = 0; k < terms; ++k) {
        if (k > 0) {
            t *= -x / k;
        }
        amps[static_cast<std::size_t>(2 * k + parity)] = norm * t;
    }
    return FockExpansion(std::move(amps));
}

} // namespace detail

/// Nonlinear vacuum squeezed state: even Fock support only.
inline FockExpansion make_nlvss(double r, std::optional<int> truncation = std::nullopt)
{
    return detail::make_nonlinear(r, truncation, 0, "make_nlvss");
}

/// Nonlinear first-excited squeezed state: odd Fock support only.
inline FockExpansion make_nless(double r, std::optional<int> truncation = std::nullopt)
{
    return detail::make_nonlinear(r, truncation, 1, "make_nless");
}

} // namespace hon

#endif
