// Where does Hong-Mandel squeezing of the binomial state |p, M=50> switch off?

#include <cstdio>

#include <hon/cli.hpp>

int main()
{
    using namespace hon;
    cli::ThresholdRequest req;
    req.base.family = StateFamily::binomial;
    req.base.params = {{"M", 50}, {"p", 0.5}};
    req.param = "p";
    req.lo = 0.5;
    req.hi = 0.99;
    req.tolerance = 1e-7;
    for (int n : {4, 6, 8}) {
        req.criterion = {Criterion::hos_shm, n, std::nullopt};
        const auto r = cli::cmd_threshold(req);
        std::printf("S_HM(%d) < 0 for p < %.4f  (%d bisection steps)\n", n, r.root, r.iterations);
    }
    // Antibunching persists across the whole range.
    for (double p : {0.5, 0.9, 0.99}) {
        const State bs = make_binomial(50, p);
        std::printf("p=%.2f  d(3)=%.6g  S_HM(4)=%.6g\n", p, hoa_d(bs, 3).value, hos_shm(bs, 4).value);
    }
}
