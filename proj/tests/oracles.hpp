#ifndef HON_TESTS_ORACLES_HPP
#define HON_TESTS_ORACLES_HPP

// Brute-force reference values: dense truncated matrices, direct sums over
// photon distributions, set-partition enumeration. None of these route
// through the library's moment engine.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <hon/fock_states.hpp>

namespace oracle
{

using cvec = std::vector<std::complex<double>>;

/// E = a + a^dagger on a vector, growing the space by one level.
inline cvec apply_e(const cvec &v)
{
    cvec out(v.size() + 1);
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (n > 0) {
            out[n - 1] += std::sqrt(double(n)) * v[n];
        }
        out[n + 1] += std::sqrt(double(n + 1)) * v[n];
    }
    return out;
}

inline cvec shift_e(const cvec &v, double mu)
{
    cvec out = apply_e(v);
    for (std::size_t n = 0; n < v.size(); ++n) {
        out[n] -= mu * v[n];
    }
    return out;
}

inline double norm2(const cvec &v)
{
    double s = 0;
    for (auto c : v) {
        s += std::norm(c);
    }
    return s;
}

/// <psi| E |psi>.
inline double mean_e(const cvec &psi)
{
    const cvec e = apply_e(psi);
    std::complex<double> s;
    for (std::size_t n = 0; n < psi.size(); ++n) {
        s += std::conj(psi[n]) * e[n];
    }
    return s.real();
}

/// <(E - <E>)^n> for even n as || (E - <E>)^{n/2} psi ||^2; nothing is truncated.
inline double central_e(const cvec &psi, int n)
{
    const double mu = mean_e(psi);
    cvec v = psi;
    for (int i = 0; i < n / 2; ++i) {
        v = shift_e(v, mu);
    }
    return norm2(v);
}

/// Same for a Fock-diagonal mixture.
inline double central_e_mixture(const std::map<int, double> &w, int n)
{
    double s = 0;
    for (const auto &[m, p] : w) {
        cvec v(static_cast<std::size_t>(m) + 1);
        v.back() = 1.0;
        s += p * central_e(v, n);
    }
    return s;
}

inline std::vector<double> distribution(const hon::State &s)
{
    return hon::photon_distribution(s);
}

/// sum_m P(m) m (m-1) ... (m-k+1).
inline double factorial_moment(const std::vector<double> &p, int k)
{
    double s = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        double f = 1;
        for (int i = 0; i < k; ++i) {
            f *= double(m) - i;
        }
        s += p[m] * f;
    }
    return s;
}

inline double mean(const std::vector<double> &p)
{
    return factorial_moment(p, 1);
}

/// sum_m P(m) (m - <N>)^n.
inline double central_number(const std::vector<double> &p, int n)
{
    const double mu = mean(p);
    double s = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        s += p[m] * std::pow(double(m) - mu, n);
    }
    return s;
}

/// <(N - lambda)^n> for a Poisson distribution by direct summation.
inline double poisson_central(double lambda, int n)
{
    double s = 0;
    double pm = std::exp(-lambda);
    for (int m = 0; m < 400; ++m) {
        if (m > 0) {
            pm *= lambda / m;
        }
        s += pm * std::pow(m - lambda, n);
    }
    return s;
}

/// Number of partitions of {0..r-1} into exactly k blocks, by restricted growth strings.
inline std::int64_t count_set_partitions(int r, int k)
{
    std::int64_t count = 0;
    std::vector<int> a(static_cast<std::size_t>(r), 0);
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (i == r) {
            count += used == k;
            return;
        }
        for (int b = 0; b <= used && b < k; ++b) {
            a[i] = b;
            rec(i + 1, std::max(used, b + 1));
        }
    };
    if (r == 0) {
        return k == 0;
    }
    rec(0, 0);
    return count;
}

/// Random normalized pure state with levels 0..n_max.
inline hon::FockExpansion random_pure(std::mt19937_64 &rng, int n_max, bool complex_amps = true)
{
    std::normal_distribution<double> g;
    std::vector<hon::Complex> amps(static_cast<std::size_t>(n_max) + 1);
    for (auto &c : amps) {
        c = {g(rng), complex_amps ? g(rng) : 0.0};
    }
    return hon::FockExpansion::normalized(amps);
}

inline cvec to_cvec(const hon::FockExpansion &psi)
{
    return {psi.amplitudes().begin(), psi.amplitudes().end()};
}

} // namespace oracle

#endif
