// Criteria for a hand-built superposition and a two-level Fock mixture.

#include <cmath>
#include <cstdio>

#include <hon/criteria.hpp>
#include <hon/multiphoton.hpp>

int main()
{
    using namespace hon;
    const State cat = FockExpansion::normalized({1.0, 0.0, 0.0, 0.0, 1.0});
    std::printf("(|0> + |4>)/sqrt2: <N>=%.4f  S_HM(2)=%.6f  S_HM(4)=%.6f  d_h(3)=%.6f\n", mean_photon_number(cat),
                hos_shm(cat, 2).value, hos_shm(cat, 4).value, hosps_dh(cat, 4).value);

    const State rho = make_diagonal_mixture({{4, 1.0}, {10, 1.0}});
    std::printf("1/2(|4><4|+|10><10|): d(3)=%g  d_h(3)=%g\n", hoa_d(rho, 3).value, hosps_dh(rho, 4).value);

    // The same squeezing test on the 2-photon Brandt-Greenberg ladder.
    const State kcs = make_k_photon_coherent(2, {0.7, 0.2});
    std::printf("2-photon coherent state: S_HM,bg(4)=%.3g  ordinary S_HM(4)=%.6f\n",
                hos_shm_bg(BGLadder(2), kcs, 4).value, hos_shm(kcs, 4).value);
}
