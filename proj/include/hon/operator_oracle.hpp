#ifndef HON_OPERATOR_ORACLE_HPP
#define HON_OPERATOR_ORACLE_HPP

// Brute-force normal ordering of single-mode bosonic operator words.
//
// Everything here is exact integer arithmetic driven only by the rewrite
// a a^dagger -> a^dagger a + 1. The expansions are deliberately produced by
// multiplying out every word, so they can serve as ground truth for the
// closed-form coefficients used elsewhere (t_{2r} and S2(r, k)).

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <hon/combinatorics.hpp>
#include <hon/errors.hpp>

namespace hon
{

using BigInt = boost::multiprecision::cpp_int;

enum class Letter : std::uint8_t { create, annihilate };

/// Operator product, leftmost letter first. Empty word is the identity.
using OperatorWord = std::vector<Letter>;

inline constexpr int kMaxWordLength = 32;

/// Sum of c_{j,k} a^dagger^j a^k with exact integer coefficients.
class NormalForm
{
public:
    using Key = std::pair<int, int>; // (creation power, annihilation power)

    NormalForm() = default;

    void add(int creation_power, int annihilation_power, const BigInt &coefficient)
    {
        if (coefficient == 0) {
            return;
        }
        const Key key{creation_power, annihilation_power};
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, coefficient);
            return;
        }
        it->second += coefficient;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }

    BigInt coefficient(int creation_power, int annihilation_power) const
    {
        auto it = terms_.find(Key{creation_power, annihilation_power});
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    const std::map<Key, BigInt> &terms() const noexcept
    {
        return terms_;
    }

    std::size_t size() const noexcept
    {
        return terms_.size();
    }

    friend bool operator==(const NormalForm &, const NormalForm &) = default;

    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto &[key, c] : terms_) {
            if (!out.empty()) {
                out += " + ";
            }
            out += c.str();
            if (key.first > 0) {
                out += " ad^" + std::to_string(key.first);
            }
            if (key.second > 0) {
                out += " a^" + std::to_string(key.second);
            }
        }
        return out;
    }

private:
    std::map<Key, BigInt> terms_;
};

namespace detail
{

// Word packed as bits (1 = create) plus a length; bit 0 is the leftmost letter.
struct PackedWord {
    std::uint32_t bits = 0;
    std::uint32_t length = 0;

    std::uint64_t key() const noexcept
    {
        return (static_cast<std::uint64_t>(length) << 32) | bits;
    }

    static PackedWord from_key(std::uint64_t k) noexcept
    {
        return PackedWord{static_cast<std::uint32_t>(k & 0xffffffffu), static_cast<std::uint32_t>(k >> 32)};
    }

    bool is_create(std::uint32_t i) const noexcept
    {
        return ((bits >> i) & 1u) != 0;
    }
};

inline PackedWord pack(const OperatorWord &w)
{
    if (w.size() > static_cast<std::size_t>(kMaxWordLength)) {
        throw DomainError("operator word longer than " + std::to_string(kMaxWordLength) + " letters");
    }
    PackedWord out;
    out.length = static_cast<std::uint32_t>(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == Letter::create) {
            out.bits |= (1u << i);
        }
    }
    return out;
}

// Index of the first annihilate immediately followed by a create, or -1.
inline int first_disorder(const PackedWord &w) noexcept
{
    for (std::uint32_t i = 0; i + 1 < w.length; ++i) {
        if (!w.is_create(i) && w.is_create(i + 1)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

inline std::uint32_t low_mask(std::uint32_t n) noexcept
{
    return n >= 32 ? 0xffffffffu : ((1u << n) - 1u);
}

// Rewrites until every word is normal ordered. Identical words are merged
// between passes; that is bookkeeping only, every word is still rewritten
// letter by letter.
inline NormalForm normal_order_sum(std::unordered_map<std::uint64_t, BigInt> work)
{
    NormalForm result;
    while (!work.empty()) {
        std::unordered_map<std::uint64_t, BigInt> next;
        for (auto &[key, coeff] : work) {
            if (coeff == 0) {
                continue;
            }
            const PackedWord w = PackedWord::from_key(key);
            const int pos = first_disorder(w);
            if (pos < 0) {
                int creates = 0;
                for (std::uint32_t i = 0; i < w.length; ++i) {
                    creates += w.is_create(i) ? 1 : 0;
                }
                result.add(creates, static_cast<int>(w.length) - creates, coeff);
                continue;
            }
            const auto i = static_cast<std::uint32_t>(pos);
            // a a^dagger -> a^dagger a
            PackedWord swapped = w;
            swapped.bits |= (1u << i);
            swapped.bits &= ~(1u << (i + 1));
            next[swapped.key()] += coeff;
            // ... + 1: drop both letters
            PackedWord contracted;
            contracted.length = w.length - 2;
            const std::uint32_t upper = i + 2 >= 32 ? 0u : (w.bits >> (i + 2));
            contracted.bits = (w.bits & low_mask(i)) | (upper << i);
            next[contracted.key()] += coeff;
        }
        work = std::move(next);
    }
    return result;
}

} // namespace detail

inline NormalForm normal_order_word(const OperatorWord &word)
{
    std::unordered_map<std::uint64_t, BigInt> work;
    work[detail::pack(word).key()] = 1;
    return detail::normal_order_sum(std::move(work));
}

inline constexpr int kMaxQuadraturePower = 16;

/// Normal-ordered (a^dagger + a)^m from all 2^m words.
inline NormalForm expand_quadrature_power(int m)
{
    if (m < 0 || m > kMaxQuadraturePower) {
        throw DomainError("expand_quadrature_power: m must lie in [0, " + std::to_string(kMaxQuadraturePower) + "]");
    }
    std::unordered_map<std::uint64_t, BigInt> work;
    const std::uint32_t count = 1u << m;
    for (std::uint32_t bits = 0; bits < count; ++bits) {
        work[detail::PackedWord{bits, static_cast<std::uint32_t>(m)}.key()] += 1;
    }
    return detail::normal_order_sum(std::move(work));
}

/// Normal-ordered (a^dagger a)^r.
inline NormalForm expand_number_power(int r)
{
    if (r < 1 || 2 * r > kMaxWordLength) {
        throw DomainError("expand_number_power: r must lie in [1, " + std::to_string(kMaxWordLength / 2) + "]");
    }
    OperatorWord word;
    for (int i = 0; i < r; ++i) {
        word.push_back(Letter::create);
        word.push_back(Letter::annihilate);
    }
    return normal_order_word(word);
}

/// sum_r t_{2r} mC_{2r} :(a^dagger + a)^{m-2r}: assembled from the
/// combinatorics kernels.
inline NormalForm quadrature_power_closed_form(int m)
{
    if (m < 0) {
        throw DomainError("quadrature_power_closed_form: negative m");
    }
    NormalForm out;
    for (int r = 0; 2 * r <= m; ++r) {
        const BigInt outer = hong_mandel_coefficient(r) * binomial(m, 2 * r);
        const int q = m - 2 * r;
        for (int j = 0; j <= q; ++j) {
            out.add(j, q - j, outer * binomial(q, j));
        }
    }
    return out;
}

inline NormalForm number_power_closed_form(int r)
{
    NormalForm out;
    for (int k = 1; k <= r; ++k) {
        out.add(k, k, stirling2(r, k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Action on Fock states, used to check rewrites against a|n> = sqrt(n)|n-1>.

/// Sparse vector over Fock indices.
using FockVector = std::map<int, double>;

inline FockVector apply_word(const OperatorWord &word, int n)
{
    if (n < 0) {
        throw DomainError("apply_word: negative Fock index");
    }
    int level = n;
    double amp = 1.0;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it == Letter::annihilate) {
            if (level == 0) {
                return {};
            }
            amp *= std::sqrt(static_cast<double>(level));
            --level;
        } else {
            ++level;
            amp *= std::sqrt(static_cast<double>(level));
        }
    }
    return FockVector{{level, amp}};
}

inline FockVector apply_normal_form(const NormalForm &form, int n)
{
    FockVector out;
    for (const auto &[key, c] : form.terms()) {
        const auto [j, k] = key;
        if (k > n) {
            continue;
        }
        // a^dagger^j a^k |n> = sqrt(n!/(n-k)!) sqrt((n-k+j)!/(n-k)!) |n-k+j>
        double amp = c.convert_to<double>();
        for (int i = 0; i < k; ++i) {
            amp *= std::sqrt(static_cast<double>(n - i));
        }
        for (int i = 1; i <= j; ++i) {
            amp *= std::sqrt(static_cast<double>(n - k + i));
        }
        out[n - k + j] += amp;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification reports

struct OrderingCheck {
    int order = 0;
    bool pass = false;
    std::size_t oracle_terms = 0;
    std::size_t mismatched_terms = 0;
};

struct OrderingReport {
    std::vector<OrderingCheck> checks;

    bool all_pass() const noexcept
    {
        for (const auto &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return !checks.empty();
    }
};

namespace detail
{

inline std::size_t count_mismatches(const NormalForm &lhs, const NormalForm &rhs)
{
    std::size_t n = 0;
    for (const auto &[key, c] : lhs.terms()) {
        if (rhs.coefficient(key.first, key.second) != c) {
            ++n;
        }
    }
    for (const auto &[key, c] : rhs.terms()) {
        if (lhs.coefficient(key.first, key.second) == 0) {
            ++n;
        }
    }
    return n;
}

} // namespace detail

/// Compares the brute-force expansion of (a^dagger + a)^m against the
/// t_{2r} closed form for every 1 <= m <= m_max. Mismatches are reported.
inline OrderingReport verify_theorem1(int m_max)
{
    if (m_max < 1 || m_max > kMaxQuadraturePower) {
        throw DomainError("verify_theorem1: m_max must lie in [1, " + std::to_string(kMaxQuadraturePower) + "]");
    }
    OrderingReport report;
    for (int m = 1; m <= m_max; ++m) {
        const NormalForm oracle = expand_quadrature_power(m);
        const NormalForm closed = quadrature_power_closed_form(m);
        OrderingCheck c;
        c.order = m;
        c.oracle_terms = oracle.size();
        c.mismatched_terms = detail::count_mismatches(oracle, closed);
        c.pass = c.mismatched_terms == 0;
        report.checks.push_back(c);
    }
    return report;
}

/// Same for N^r against S2(r, k).
inline OrderingReport verify_number_power(int r_max)
{
    if (r_max < 1 || 2 * r_max > kMaxWordLength) {
        throw DomainError("verify_number_power: r_max must lie in [1, " + std::to_string(kMaxWordLength / 2) + "]");
    }
    OrderingReport report;
    for (int r = 1; r <= r_max; ++r) {
        const NormalForm oracle = expand_number_power(r);
        const NormalForm closed = number_power_closed_form(r);
        OrderingCheck c;
        c.order = r;
        c.oracle_terms = oracle.size();
        c.mismatched_terms = detail::count_mismatches(oracle, closed);
        c.pass = c.mismatched_terms == 0;
        report.checks.push_back(c);
    }
    return report;
}

} // namespace hon

#endif
