#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <hon/criteria.hpp>

#include "oracles.hpp"

using namespace hon;

namespace
{

const State kMix38 = make_diagonal_mixture({{3, 0.5}, {8, 0.5}});
const State kMix410 = make_diagonal_mixture({{4, 0.5}, {10, 0.5}});

void expect_agree(double closed, double engine, const std::string &what)
{
    if (std::fabs(engine) < 1e-4) {
        EXPECT_LT(std::fabs(closed - engine), 1e-10) << what << " closed=" << closed << " engine=" << engine;
    } else {
        EXPECT_LT(std::fabs(closed - engine) / std::fabs(engine), 1e-8)
            << what << " closed=" << closed << " engine=" << engine;
    }
}

std::vector<double> open_unit_grid(int points)
{
    std::vector<double> out;
    for (int i = 1; i <= points; ++i) {
        out.push_back(static_cast<double>(i) / (points + 1));
    }
    return out;
}

} // namespace

TEST(HoaD, Examples)
{
    for (double mag : {0.3, 1.0, 2.2}) {
        for (int l = 1; l <= 5; ++l) {
            EXPECT_NEAR(hoa_d(make_coherent(mag), l).value, 0.0, 1e-9 * std::pow(mag * mag, l + 1) + 1e-12);
        }
    }
    const auto a = hoa_d(kMix38, 3);
    EXPECT_NEAR(a.value, -75.0625, 1e-9);
    EXPECT_TRUE(a.nonclassical);
    const auto b = hoa_d(kMix410, 3);
    EXPECT_NEAR(b.value, 131.0, 1e-9);
    EXPECT_FALSE(b.nonclassical);
    EXPECT_EQ(b.criterion, Criterion::hoa_d);
    EXPECT_EQ(b.order, 3);
}

TEST(HoaD, OrderRange)
{
    EXPECT_THROW(hoa_d(kMix38, 0), UnsupportedOrderError);
    EXPECT_THROW(hoa_d(kMix38, kMaxAntibunchingOrder + 1), UnsupportedOrderError);
    EXPECT_NO_THROW(hoa_d(kMix38, kMaxAntibunchingOrder));
}

TEST(HoaLeeR, Examples)
{
    EXPECT_NEAR(hoa_lee_R(make_coherent(1.4), 2, 1).value, 0.0, 1e-9);
    EXPECT_NEAR(hoa_lee_R(FockExpansion::number_state(5), 1, 1).value, -0.2, 1e-14);
    // <N^(4)> = 0 in the numerator is fine; the denominator vanishes one order up.
    EXPECT_NEAR(hoa_lee_R(FockExpansion::number_state(3), 3, 1).value, -1.0, 1e-14);
    EXPECT_THROW(hoa_lee_R(FockExpansion::number_state(3), 4, 1), ZeroDenominatorError);
    EXPECT_THROW(hoa_lee_R(FockExpansion::number_state(3), 2, 3), DomainError);
    const auto r = hoa_lee_R(kMix38, 3, 2);
    ASSERT_TRUE(r.secondary_order.has_value());
    EXPECT_EQ(*r.secondary_order, 2);
}

TEST(HoaBaAnA, Examples)
{
    EXPECT_NEAR(hoa_ba_an_A(make_coherent(2.0), 3).value, 0.0, 1e-9);
    const State five = FockExpansion::number_state(5);
    EXPECT_EQ(hoa_ba_an_A(five, 1).nonclassical, hoa_d(five, 1).nonclassical);
    EXPECT_TRUE(hoa_ba_an_A(five, 1).nonclassical);
    EXPECT_THROW(hoa_ba_an_A(FockExpansion::number_state(0), 1), ZeroDenominatorError);
}

TEST(HoaBaAnA, NegativeAImpliesNegativeD)
{
    // <N^(l+1)> < <N^(l)><N> and <N^(l)><N> < <N>^(l+1) chain to d(l) < 0.
    std::mt19937_64 rng(41);
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
        const State s = oracle::random_pure(rng, 2 + i % 8);
        for (int l = 2; l <= 5; ++l) {
            if (factorial_moment(s, l) == 0.0 || !(hoa_d(s, l - 1).value < 0)) {
                continue;
            }
            if (hoa_ba_an_A(s, l).nonclassical) {
                EXPECT_TRUE(hoa_d(s, l).nonclassical) << i << " l=" << l;
                ++compared;
            }
        }
    }
    EXPECT_GT(compared, 100);
}

TEST(HoaBaAnA, SignMatchesHoaDOnStateFamilies)
{
    std::vector<State> states{FockExpansion::number_state(7), kMix38, kMix410};
    for (int M : {5, 20, 50}) {
        for (double p = 0.1; p < 0.95; p += 0.1) {
            states.push_back(make_binomial(M, p));
        }
    }
    for (double r = 0.1; r < 1.45; r += 0.1) {
        states.push_back(make_nless(r));
        states.push_back(make_nlvss(r));
    }
    for (const auto &s : states) {
        for (int l = 1; l <= 5; ++l) {
            bool premise = factorial_moment(s, l) > 0.0;
            for (int j = 1; j < l; ++j) {
                premise = premise && hoa_d(s, j).value < 0;
            }
            if (premise) {
                EXPECT_EQ(hoa_ba_an_A(s, l).nonclassical, hoa_d(s, l).nonclassical) << "l=" << l;
            }
        }
    }
}

TEST(HoaBaAnA, ConverseFailsOnSomeStates)
{
    // d(1) < 0 but A_2 > 0 while d(2) < 0: the sign agreement is not a theorem.
    std::mt19937_64 rng(41);
    bool found = false;
    for (int i = 0; i < 4000 && !found; ++i) {
        const State s = oracle::random_pure(rng, 2 + i % 8);
        found = factorial_moment(s, 2) > 0.0 && hoa_d(s, 1).value < 0 && hoa_d(s, 2).value < 0 &&
                hoa_ba_an_A(s, 2).value > 0;
    }
    EXPECT_TRUE(found);
}

TEST(HospsDh, Examples)
{
    const auto a = hosps_dh(kMix410, 4);
    EXPECT_NEAR(a.value, -73.0, 1e-9);
    EXPECT_TRUE(a.nonclassical);
    EXPECT_EQ(a.order, 3);
    const auto b = hosps_dh(kMix38, 2);
    EXPECT_NEAR(b.value, 0.75, 1e-12);
    EXPECT_FALSE(b.nonclassical);
    EXPECT_EQ(b.order, 1);
    EXPECT_NEAR(hosps_dh(make_coherent(1.7), 6).value, 0.0, 1e-8);
    EXPECT_THROW(hosps_dh(kMix38, 1), UnsupportedOrderError);
}

TEST(HospsDh, MatchesDistributionOracle)
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = oracle::random_pure(rng, 9);
        const auto p = photon_distribution(psi);
        const double mu = oracle::mean(p);
        for (int n = 2; n <= 8; ++n) {
            const double expect = oracle::central_number(p, n) - oracle::poisson_central(mu, n);
            EXPECT_NEAR(hosps_dh(psi, n).value, expect, 1e-9 * std::max(1.0, std::fabs(expect))) << n;
        }
    }
}

TEST(HospsBridge, Examples)
{
    EXPECT_LT(hosps_bridge_check(kMix410, 4), 1e-9);
    EXPECT_LT(hosps_bridge_check(make_binomial(20, 0.3), 4), 1e-9);
    EXPECT_LT(hosps_bridge_check(make_coherent(1.0), 3), 1e-9);
}

TEST(HosShm, Examples)
{
    EXPECT_NEAR(hos_shm(FockExpansion::number_state(0), 4).value, 0.0, 1e-12);
    EXPECT_NEAR(hos_shm(FockExpansion::number_state(1), 2).value, 2.0, 1e-12);
    EXPECT_GT(hos_shm(make_binomial(50, 0.87), 4).value, 0.0);
    EXPECT_THROW(hos_shm(kMix38, 3), UnsupportedOrderError);
    EXPECT_THROW(hos_shm(kMix38, 14), UnsupportedOrderError);
}

TEST(HosShm, MatchesDenseOracle)
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = oracle::random_pure(rng, 6);
        for (int n : {2, 4, 6, 8, 10}) {
            const double base = pochhammer_half(n / 2).convert_to<double>();
            const double expect = (oracle::central_e(oracle::to_cvec(psi), n) / std::pow(2.0, n / 2) - base) / base;
            EXPECT_NEAR(hos_shm(psi, n).value, expect, 1e-10 * std::max(1.0, std::fabs(expect))) << n;
        }
    }
}

TEST(ClosedFormBinomial, Examples)
{
    EXPECT_NEAR(closed_form_binomial(Criterion::hoa_d, 2, 0.5, 1), -0.5, 1e-15);
    EXPECT_NEAR(closed_form_binomial(Criterion::hoa_d, 1, 0.5, 1), -0.25, 1e-15);
    for (double p : open_unit_grid(30)) {
        EXPECT_LT(closed_form_binomial(Criterion::hosps_dh, 20, p, 4), 0.0) << p;
    }
    EXPECT_THROW(closed_form_binomial(Criterion::hoa_lee_R, 5, 0.5, 1), DomainError);
    EXPECT_THROW(closed_form_binomial(Criterion::hoa_d, 5, 1.5, 1), DomainError);
}

TEST(ClosedFormBinomial, AgreesWithEngine)
{
    for (int M : {5, 20, 50}) {
        for (double p = 0.1; p < 0.95; p += 0.1) {
            const State bs = make_binomial(M, p);
            const std::string tag = "M=" + std::to_string(M) + " p=" + std::to_string(p);
            for (int l = 1; l <= 5; ++l) {
                expect_agree(closed_form_binomial(Criterion::hoa_d, M, p, l), hoa_d(bs, l).value, tag + " d");
            }
            for (int n = 2; n <= 8; ++n) {
                expect_agree(closed_form_binomial(Criterion::hosps_dh, M, p, n), hosps_dh(bs, n).value,
                             tag + " dh" + std::to_string(n));
            }
            for (int n : {2, 4, 6, 8}) {
                expect_agree(closed_form_binomial(Criterion::hos_shm, M, p, n), hos_shm(bs, n).value,
                             tag + " shm" + std::to_string(n));
            }
        }
    }
}

TEST(ClosedFormNonlinear, Examples)
{
    EXPECT_NEAR(closed_form_nonlinear(Criterion::hoa_d, NonlinearFamily::nless, 0.0, 1), -1.0, 1e-15);
    EXPECT_NEAR(closed_form_nonlinear(Criterion::hos_shm, NonlinearFamily::nlvss, 0.0, 4), 0.0, 1e-10);
    EXPECT_GT(closed_form_nonlinear(Criterion::hoa_d, NonlinearFamily::nlvss, 1.0, 1), 0.0);
    EXPECT_THROW(closed_form_nonlinear(Criterion::hoa_d, NonlinearFamily::nlvss, 1.0, 1, 2), TruncationError);
}

TEST(ClosedFormNonlinear, AgreesWithEngine)
{
    for (double r = 0.2; r < 1.45; r += 0.2) {
        for (auto fam : {NonlinearFamily::nlvss, NonlinearFamily::nless}) {
            const State s = fam == NonlinearFamily::nless ? State{make_nless(r)} : State{make_nlvss(r)};
            const std::string tag = std::string(fam == NonlinearFamily::nless ? "nless" : "nlvss") +
                                    " r=" + std::to_string(r);
            for (int l = 1; l <= 5; ++l) {
                expect_agree(closed_form_nonlinear(Criterion::hoa_d, fam, r, l), hoa_d(s, l).value, tag + " d");
            }
            for (int n = 2; n <= 8; ++n) {
                expect_agree(closed_form_nonlinear(Criterion::hosps_dh, fam, r, n), hosps_dh(s, n).value,
                             tag + " dh" + std::to_string(n));
            }
            for (int n : {2, 4, 6, 8, 10, 12}) {
                expect_agree(closed_form_nonlinear(Criterion::hos_shm, fam, r, n), hos_shm(s, n).value,
                             tag + " shm" + std::to_string(n));
            }
        }
    }
}

TEST(Binomial, AlwaysAntibunched)
{
    for (int M : {5, 20, 50}) {
        for (double p : open_unit_grid(50)) {
            const State bs = make_binomial(M, p);
            for (int l = 1; l <= 5; ++l) {
                EXPECT_LT(hoa_d(bs, l).value, 0.0) << M << " " << p << " l=" << l;
            }
        }
    }
}

TEST(Binomial, DepthGrowsWithOrderWhenMeanAtLeastOne)
{
    int checked = 0;
    for (int M : {5, 20, 50}) {
        for (double p : open_unit_grid(50)) {
            if (M * p < 1.0) {
                continue;
            }
            const State bs = make_binomial(M, p);
            for (int l = 2; l <= 5; ++l) {
                EXPECT_LT(hoa_d(bs, l).value, hoa_d(bs, l - 1).value) << M << " " << p << " l=" << l;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(Binomial, DepthOrderingReversesBelowOnePhoton)
{
    // <N> = 0.1: every d(l) is of order p^(l+1), so higher orders sit closer to zero.
    const State bs = make_binomial(5, 0.02);
    for (int l = 2; l <= 5; ++l) {
        EXPECT_LT(hoa_d(bs, l).value, 0.0);
        EXPECT_GT(hoa_d(bs, l).value, hoa_d(bs, l - 1).value) << l;
    }
}

TEST(Independence, Witnesses)
{
    const State bs = make_binomial(50, 0.9);
    EXPECT_LT(hoa_d(bs, 3).value, 0.0);
    EXPECT_GT(hos_shm(bs, 4).value, 0.0);

    const State e = make_nless(0.8);
    EXPECT_LT(hoa_d(e, 5).value, 0.0);
    EXPECT_GT(hos_shm(e, 4).value, 0.0);

    const State v = make_nlvss(0.8);
    EXPECT_LT(hos_shm(v, 4).value, 0.0);
    EXPECT_GT(hosps_dh(v, 4).value, 0.0);
}

TEST(Coherent, EveryCriterionVanishes)
{
    for (double mag : {0.0, 0.5, 1.0}) {
        const State s = make_coherent(std::polar(mag, 1.1));
        for (int l = 1; l <= kMaxAntibunchingOrder; ++l) {
            EXPECT_LT(std::fabs(hoa_d(s, l).value), 1e-8) << "d " << l;
            if (mag == 0.0) {
                continue;
            }
            EXPECT_LT(std::fabs(hoa_ba_an_A(s, l).value), 1e-8) << "A " << l;
            for (int m = 1; m <= l; ++m) {
                EXPECT_LT(std::fabs(hoa_lee_R(s, l, m).value), 1e-8) << "R " << l << "," << m;
            }
        }
        for (int n = 2; n <= kMaxMomentOrder; ++n) {
            EXPECT_LT(std::fabs(hosps_dh(s, n).value), 1e-8) << "dh " << n;
            if (n % 2 == 0) {
                EXPECT_LT(std::fabs(hos_shm(s, n).value), 1e-8) << "shm " << n;
            }
        }
    }
}

TEST(Coherent, LargeAmplitudeResidualsAtRoundingLevel)
{
    // The residual scales with the moments themselves: a double-precision
    // amplitude vector fixes the photon distribution only to ~1e-16 relative.
    for (double mag : {1.5, 2.0, 3.0}) {
        const State s = make_coherent(mag);
        const double lambda = mag * mag;
        for (int l = 1; l <= kMaxAntibunchingOrder; ++l) {
            EXPECT_LT(std::fabs(hoa_d(s, l).value), 1e-13 * std::pow(lambda, l + 1)) << mag << " d " << l;
        }
        for (int n = 2; n <= kMaxMomentOrder; ++n) {
            const double scale = oracle::poisson_central(lambda, 2 * ((n + 1) / 2));
            EXPECT_LT(std::fabs(hosps_dh(s, n).value), 1e-13 * scale) << mag << " dh " << n;
            if (n % 2 == 0) {
                EXPECT_LT(std::fabs(hos_shm(s, n).value), 1e-12) << mag << " shm " << n;
            }
        }
    }
}

TEST(CriterionNames, RoundTrip)
{
    for (auto c : {Criterion::hoa_d, Criterion::hoa_lee_R, Criterion::hoa_ba_an_A, Criterion::hosps_dh,
                   Criterion::hos_shm, Criterion::hos_bg}) {
        EXPECT_EQ(parse_criterion(to_string(c)), c);
    }
    EXPECT_FALSE(parse_criterion("hoa").has_value());
}
