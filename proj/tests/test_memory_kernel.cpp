#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "volreg/errors.hpp"
#include "volreg/memory_kernel.hpp"

using namespace volreg;

namespace {

// Closed form of (int_0^T |beta e^{-gamma t}|^p dt)^{1/p}; oracle for the
// quadrature path on the exponential family.
double exp_lp_closed_form(double beta, double gamma, double p, double T) {
    const double tail = std::isfinite(T) ? 1.0 - std::exp(-p * gamma * T) : 1.0;
    return std::pow(std::pow(beta, p) * tail / (p * gamma), 1.0 / p);
}

}  // namespace

TEST_CASE("pointwise evaluation") {
    const auto k11 = MemoryKernel::exponential(1.0, 1.0);
    CHECK(k11.eval({0.0, 0.0}).real() == doctest::Approx(1.0));
    const auto k23 = MemoryKernel::exponential(2.0, 3.0);
    CHECK(k23.eval({1.0, 0.0}).real() == doctest::Approx(0.099574136735727886).epsilon(1e-14));
    const auto m1 = MemoryKernel::monomial_exponential(1.0, 1.0, 1);
    CHECK(m1.eval({1.0, 0.0}).real() == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK_THROWS_AS(k11.eval({-0.1, 0.0}), ValidationError);
}

TEST_CASE("kernel grammar") {
    const auto k = MemoryKernel::parse("exp:2,3");
    CHECK(k.beta() == doctest::Approx(2.0));
    CHECK(k.gamma() == doctest::Approx(3.0));
    CHECK(k.monomial_degree() == 0);
    const auto m = MemoryKernel::parse("mexp:1.5,0.5,2");
    CHECK(m.monomial_degree() == 2);
    CHECK(MemoryKernel::parse(m.spec_string()).spec_string() == m.spec_string());

    CHECK_THROWS_AS(MemoryKernel::parse("exp:1"), ValidationError);
    CHECK_THROWS_AS(MemoryKernel::parse("exp:a,b"), ValidationError);
    CHECK_THROWS_AS(MemoryKernel::parse("gauss:1,1"), ValidationError);
    CHECK_THROWS_AS(MemoryKernel::parse("mexp:1,1,1.5"), ValidationError);
    CHECK_THROWS_AS(MemoryKernel::parse("exp:-1,1"), ValidationError);
    CHECK_THROWS_AS(MemoryKernel::parse("exp:1,0"), ValidationError);
    CHECK(MemoryKernel::parse("exp:0,1").beta() == 0.0);  // memoryless member
}

TEST_CASE("halfline Lp norms match the exponential closed form") {
    const double inf = std::numeric_limits<double>::infinity();
    const auto k11 = MemoryKernel::exponential(1.0, 1.0);
    const auto k23 = MemoryKernel::exponential(2.0, 3.0);

    CHECK(k11.lp_halfline_norm(2.0, inf) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    CHECK(k23.lp_halfline_norm(1.0, inf) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(k11.lp_halfline_norm(2.0, 0.0) == 0.0);

    for (double p : {1.0, 2.0, 4.0 / 3.0}) {
        for (double T : {0.1, 1.0, inf}) {
            for (const auto& k : {k11, k23}) {
                const double horizon = std::isfinite(T) ? T : 50.0 / k.gamma();
                const double closed = exp_lp_closed_form(k.beta(), k.gamma(), p, horizon);
                CHECK(k.lp_halfline_norm(p, T) == doctest::Approx(closed).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("holomorphy: Cauchy-Riemann residual on a sector grid") {
    const auto k = MemoryKernel::monomial_exponential(1.3, 0.8, 1);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 1; i <= 8; ++i) {
        for (int j = -6; j <= 6; ++j) {
            const double tau = 0.25 * i;
            const double sigma = tau * std::tan(0.7853981633974483) * j / 8.0;
            if (tau - h <= 0.0) continue;
            const auto at = [&](double x, double y) { return k.eval({x, y}); };
            const std::complex<double> du_dx =
                (at(tau + h, sigma) - at(tau - h, sigma)) / (2.0 * h);
            const std::complex<double> du_dy =
                (at(tau, sigma + h) - at(tau, sigma - h)) / (2.0 * h);
            // f holomorphic iff d/dx f = -i d/dy f.
            const std::complex<double> residual = du_dx - std::complex<double>(0.0, -1.0) * du_dy;
            worst = std::max(worst, std::abs(residual));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("real-axis profile is eventually decreasing") {
    const auto k = MemoryKernel::monomial_exponential(1.0, 2.0, 3);
    const double peak = 3.0 / 2.0;  // argmax of t^3 e^{-2t}
    double prev = k.eval_real(peak);
    for (double t = peak + 0.5; t < peak + 6.0; t += 0.5) {
        const double v = k.eval_real(t);
        CHECK(v < prev);
        prev = v;
    }
}
