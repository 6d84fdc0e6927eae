#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "volreg/errors.hpp"
#include "volreg/regularity.hpp"

using namespace volreg;

namespace {
constexpr double kPi4 = std::numbers::pi / 4.0;
}

TEST_CASE("lp time norm") {
    SUBCASE("constant sequence returns the state norm") {
        StateVector c(std::vector<double>{3.0, 4.0});
        std::vector<StateVector> samples(11, c);
        for (double p : {1.5, 2.0, 3.0}) {
            CHECK(lp_time_norm(samples, p, 0.1) == doctest::Approx(5.0).epsilon(1e-12));
        }
    }
    SUBCASE("exponential decay closed form") {
        const int m = 64;
        std::vector<double> norms(static_cast<std::size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) norms[static_cast<std::size_t>(j)] = std::exp(-1.0 * j / m);
        CHECK(lp_time_norm(norms, 2.0, 1.0 / m) ==
              doctest::Approx(0.65751985398289963).epsilon(1e-8));
    }
    SUBCASE("homogeneity") {
        std::vector<double> norms{1.0, 0.5, 0.25, 0.125, 0.0625};
        std::vector<double> tripled{3.0, 1.5, 0.75, 0.375, 0.1875};
        CHECK(lp_time_norm(tripled, 2.0, 0.1) ==
              doctest::Approx(3.0 * lp_time_norm(norms, 2.0, 0.1)).epsilon(1e-13));
    }
    SUBCASE("validation") {
        std::vector<double> two{1.0, 2.0};
        CHECK_THROWS_AS(lp_time_norm(two, 2.0, 0.1), ValidationError);
        std::vector<double> three{1.0, 2.0, 3.0};
        CHECK_THROWS_AS(lp_time_norm(three, 1.0, 0.1), ValidationError);
    }
}

TEST_CASE("admissibility constants") {
    const auto op = SpectralOperator::dirichlet(32);
    const Observation half = frac_power_observation(op, 0.5);
    SUBCASE("long-window constant approaches 1/sqrt(2)") {
        const double window = 10.0 / op.eigenvalue(0);
        const AdmissibilityReport rep = admissibility_constant(op, half, 2.0, window, 8, 3);
        CHECK(rep.gamma_hat == doctest::Approx(std::sqrt(0.5)).epsilon(0.01));
        CHECK(rep.attaining.substr(0, 6) == "basis_");
    }
    SUBCASE("short windows are attained on the top basis mode") {
        // (1 - e^{-2 lambda w})/2 is strictly increasing in lambda here
        const AdmissibilityReport rep = admissibility_constant(op, half, 2.0, 1e-5, 8, 3);
        CHECK(rep.attaining == "basis_32");
    }
    SUBCASE("p = 2 probe values match the spectral closed form") {
        for (double window : {0.05, 0.5}) {
            const AdmissibilityReport rep = admissibility_constant(op, half, 2.0, window, 4, 7);
            double best = 0.0;
            for (int k = 0; k < op.modes(); ++k) {
                best = std::max(best, (1.0 - std::exp(-2.0 * op.eigenvalue(k) * window)) / 2.0);
            }
            CHECK(rep.gamma_hat == doctest::Approx(std::sqrt(best)).epsilon(1e-7));
        }
    }
    SUBCASE("zero operator has zero constant") {
        const AdmissibilityReport rep =
            admissibility_constant(op, zero_observation(32), 2.0, 1.0, 4, 7);
        CHECK(rep.gamma_hat == 0.0);
    }
    SUBCASE("monotone in the window") {
        double prev = 0.0;
        for (double window : {0.1, 1.0, 10.0}) {
            const double g = admissibility_constant(op, half, 2.0, window, 8, 3).gamma_hat;
            CHECK(g >= prev);
            prev = g;
        }
    }
    SUBCASE("reported constant bounds the output energy of fresh random states") {
        const double window = 0.4;
        const double gamma = admissibility_constant(op, half, 2.0, window, 32, 3).gamma_hat;
        std::mt19937_64 rng(909);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            StateVector x = StateVector::zeros(32);
            double n2 = 0.0;
            for (auto& v : x.c) {
                v = gauss(rng);
                n2 += v * v;
            }
            // closed form of the p = 2 output energy for C = (-A)^{1/2}
            double energy = 0.0;
            for (int k = 0; k < 32; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                energy += x.c[ku] * x.c[ku] *
                          (1.0 - std::exp(-2.0 * op.eigenvalue(k) * window)) / 2.0;
            }
            CHECK(energy <= gamma * gamma * n2 * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("split-perturbation output-energy bound") {
    const auto op = SpectralOperator::dirichlet(16);
    const auto kernel = MemoryKernel::exponential(1.0, 1.0);
    const PerturbationBoundReport rep =
        check_perturbation_bound(kernel, op, 0.5, 2.0, 4.0, kPi4, 1.0, 30, 99);
    CHECK(rep.violations == 0);
    CHECK(rep.max_ratio <= 1.0 + 1e-9);
    CHECK(rep.samples == 30);
}

TEST_CASE("memory trace bound") {
    const auto op = SpectralOperator::dirichlet(16);
    SUBCASE("requires q > 2p") {
        VolterraProblem prob{op, 0.5, MemoryKernel::exponential(1.0, 1.0),
                             random_band_forcing(16, 1), 1.0, 1e-2};
        const Trajectory traj = solve_augmented(prob);
        CHECK_THROWS_AS(memory_trace_bound(prob, traj, 2.0, 4.0, kPi4), ValidationError);
    }
    SUBCASE("memoryless kernel gives zero lhs") {
        VolterraProblem prob{op, 0.5, MemoryKernel::exponential(0.0, 1.0),
                             random_band_forcing(16, 1), 1.0, 1e-2};
        const Trajectory traj = solve_augmented(prob);
        const TraceBoundResult tb = memory_trace_bound(prob, traj, 2.0, 6.0, kPi4);
        CHECK(tb.lhs == 0.0);
        CHECK(tb.rhs >= 0.0);
    }
    SUBCASE("inequality holds on seeded forcings") {
        for (std::uint64_t seed : {10ull, 11ull, 12ull, 13ull, 14ull}) {
            VolterraProblem prob{op, 0.5, MemoryKernel::exponential(1.0, 1.0),
                                 random_band_forcing(16, seed), 1.0, 1e-3};
            const Trajectory traj = solve_augmented(prob);
            const TraceBoundResult tb = memory_trace_bound(prob, traj, 2.0, 6.0, kPi4);
            CHECK(tb.lhs <= tb.rhs * (1.0 + 1e-9));
        }
    }
    SUBCASE("rhs shrinks with the horizon") {
        double prev = 1e300;
        for (double T : {0.5, 0.25, 0.125}) {
            VolterraProblem prob{op, 0.5, MemoryKernel::exponential(1.0, 1.0),
                                 random_band_forcing(16, 2), T, 1e-3};
            const Trajectory traj = solve_augmented(prob);
            const TraceBoundResult tb = memory_trace_bound(prob, traj, 2.0, 6.0, kPi4);
            CHECK(tb.rhs < prev);
            prev = tb.rhs;
        }
    }
}

TEST_CASE("regularity ratio ensemble") {
    const auto op = SpectralOperator::dirichlet(32);
    SUBCASE("pure Cauchy ensemble is bounded and stable") {
        VolterraProblem base{op, 0.5, MemoryKernel::exponential(0.0, 1.0), zero_forcing(), 0.1,
                             5e-4};
        const RegularityReport rep = verify_max_regularity(base, 2.0, 20, 421);
        CHECK(rep.ratio_max > 0.0);
        CHECK(std::isfinite(rep.ratio_max));
        const RegularityReport rep2 = verify_max_regularity(base, 2.0, 40, 421);
        CHECK(std::abs(rep2.ratio_max - rep.ratio_max) <= 0.25 * rep.ratio_max);
        // shared seed stream: the first 20 samples coincide
        CHECK(rep2.ratio[0] == doctest::Approx(rep.ratio[0]).epsilon(1e-14));
    }
    SUBCASE("memory kernel with small horizon satisfies the smallness condition "
            "and the assembled bound certifies every ratio") {
        VolterraProblem base{op, 0.5, MemoryKernel::exponential(1.0, 1.0), zero_forcing(), 0.1,
                             5e-4};
        const RegularityReport rep = verify_max_regularity(base, 2.0, 20, 77);
        CHECK(rep.smallness);
        CHECK(rep.beta_T < 1.0);
        CHECK(std::isfinite(rep.assembled_bound));
        CHECK(rep.ratio_max <= rep.assembled_bound * 1.02);
    }
    SUBCASE("single low-mode forcing obeys the assembled chain bound") {
        VolterraProblem base{op, 0.5, MemoryKernel::exponential(1.0, 1.0),
                             single_mode_forcing(32, 0), 0.1, 5e-4};
        const RegularityReport rep = verify_max_regularity(base, 2.0, 2, 77);
        const Trajectory traj = solve_augmented(base);
        const int m = traj.steps();
        std::vector<double> nz(static_cast<std::size_t>(m) + 1),
            naz(static_cast<std::size_t>(m) + 1), nzd(static_cast<std::size_t>(m) + 1),
            nf(static_cast<std::size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            nz[ju] = norm(traj.z[ju]);
            naz[ju] = norm(generator_apply(op, traj.z[ju]));
            nzd[ju] = norm(equation_zdot(base, traj, j));
            nf[ju] = norm(base.forcing.at(traj.times[ju], 32));
        }
        const double ratio = (lp_time_norm(nzd, 2.0, traj.dt) + lp_time_norm(naz, 2.0, traj.dt) +
                              lp_time_norm(nz, 2.0, traj.dt)) /
                             lp_time_norm(nf, 2.0, traj.dt);
        CHECK(ratio <= rep.assembled_bound * 1.02);
    }
    SUBCASE("validation") {
        VolterraProblem base{op, 0.5, MemoryKernel::exponential(1.0, 1.0), zero_forcing(), 0.1,
                             5e-4};
        CHECK_THROWS_AS(verify_max_regularity(base, 2.5, 4, 1), ValidationError);
        CHECK_THROWS_AS(verify_max_regularity(base, 2.0, 0, 1), ValidationError);
        CHECK_THROWS_AS(verify_max_regularity(base, 2.0, 4, 1, 3.5), ValidationError);
    }
}
