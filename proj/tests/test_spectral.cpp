#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "volreg/errors.hpp"
#include "volreg/quadrature.hpp"
#include "volreg/spectral.hpp"

using namespace volreg;

namespace {

StateVector random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector x = StateVector::zeros(n);
    for (auto& v : x.c) v = gauss(rng);
    return x;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("eigenvalue tables") {
    const auto dir = SpectralOperator::dirichlet(8);
    for (int k = 1; k <= 8; ++k) {
        CHECK(dir.eigenvalue(k - 1) == doctest::Approx(k * k * kPi * kPi).epsilon(1e-15));
    }
    const auto neu = SpectralOperator::neumann(8);
    CHECK(neu.eigenvalue(0) == doctest::Approx(1.0));
    for (int k = 0; k < 7; ++k) {
        CHECK(neu.eigenvalue(k) > 0.0);
        CHECK(neu.eigenvalue(k) < neu.eigenvalue(k + 1));
    }
    CHECK_THROWS_AS(SpectralOperator::dirichlet(0), ValidationError);
    CHECK_THROWS_AS(SpectralOperator::neumann(4, 0.0), ValidationError);
}

TEST_CASE("semigroup action") {
    const auto op = SpectralOperator::dirichlet(1);
    const StateVector e1 = StateVector::basis(1, 0);

    SUBCASE("identity at t = 0") {
        const auto y = semigroup_apply(op, 0.0, e1);
        CHECK(y.c[0] == doctest::Approx(1.0));
    }
    SUBCASE("scalar exponential at t = 1") {
        const auto y = semigroup_apply(op, 1.0, e1);
        CHECK(y.c[0] == doctest::Approx(5.17231862038123e-5).epsilon(1e-12));
    }
    SUBCASE("monotone decay to zero") {
        double prev = 1.0;
        for (double t : {0.1, 0.5, 1.0, 5.0, 50.0}) {
            const double v = semigroup_apply(op, t, e1).c[0];
            CHECK(v < prev);
            prev = v;
        }
        CHECK(prev < 1e-200);
    }
    SUBCASE("negative time rejected") {
        CHECK_THROWS_AS(semigroup_apply(op, -0.1, e1), ValidationError);
    }
}

TEST_CASE("semigroup property and contraction at many truncation levels") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> time(0.0, 2.0);
    for (int n : {4, 32, 256}) {
        const auto op = SpectralOperator::dirichlet(n);
        for (int trial = 0; trial < 10; ++trial) {
            const double t = time(rng);
            const double s = time(rng);
            const StateVector x = random_state(n, 1000 + static_cast<std::uint64_t>(trial));
            const StateVector two_step = semigroup_apply(op, t, semigroup_apply(op, s, x));
            const StateVector one_step = semigroup_apply(op, t + s, x);
            const StateVector diff = add(two_step, scaled(one_step, -1.0));
            CHECK(norm(diff) <= 1e-12 * norm(x));
            CHECK(norm(semigroup_apply(op, t, x)) <= norm(x) * (1.0 + 1e-15));
        }
    }
}

TEST_CASE("resolvent") {
    const auto op = SpectralOperator::dirichlet(6);
    SUBCASE("diagonal inverse at lambda = 0") {
        const auto y = resolvent_apply(op, 0.0, StateVector::basis(6, 0));
        CHECK(y.c[0] == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-15));
    }
    SUBCASE("resolvent identity") {
        const StateVector x = random_state(6, 7);
        const auto r1 = resolvent_apply(op, 1.0, x);
        const auto r2 = resolvent_apply(op, 2.0, x);
        const auto lhs = add(r1, scaled(r2, -1.0));  // R(1) - R(2)
        const auto rhs = scaled(resolvent_apply(op, 1.0, resolvent_apply(op, 2.0, x)), 1.0);
        const auto diff = add(lhs, scaled(rhs, -1.0));  // (2-1) R(1) R(2)
        CHECK(norm(diff) <= 1e-12 * norm(x));
    }
    SUBCASE("spectral point rejected") {
        CHECK_THROWS_AS(resolvent_apply(op, -kPi * kPi, StateVector::basis(6, 0)), ValidationError);
    }
}

TEST_CASE("fractional powers") {
    const auto op = SpectralOperator::dirichlet(5);
    SUBCASE("square root of the first eigenvalue") {
        const auto y = fractional_power_apply(op, 0.5, StateVector::basis(5, 0));
        CHECK(y.c[0] == doctest::Approx(kPi).epsilon(1e-15));
    }
    SUBCASE("half powers compose to the full generator") {
        const StateVector x = random_state(5, 21);
        const auto half = fractional_power_apply(op, 0.5, x);
        const auto full = fractional_power_apply(op, 0.5, half);
        const auto minus_ax = scaled(generator_apply(op, x), -1.0);
        const auto diff = add(full, scaled(minus_ax, -1.0));
        CHECK(norm(diff) <= 1e-12 * norm(minus_ax));
    }
    SUBCASE("alpha = 1 multiplies by the eigenvalues") {
        const auto y = fractional_power_apply(op, 1.0, StateVector::basis(5, 2));
        CHECK(y.c[2] == doctest::Approx(op.eigenvalue(2)).epsilon(1e-15));
    }
    SUBCASE("alpha outside (0,1] rejected") {
        CHECK_THROWS_AS(fractional_power_apply(op, 0.0, StateVector::basis(5, 0)), ValidationError);
        CHECK_THROWS_AS(fractional_power_apply(op, 1.2, StateVector::basis(5, 0)), ValidationError);
    }
}

TEST_CASE("observation energy closed form vs quadrature") {
    const auto op = SpectralOperator::dirichlet(12);
    const StateVector x = random_state(12, 5);
    for (double window : {0.05, 0.5}) {
        auto integrand = [&](double t) {
            const auto y = fractional_power_apply(op, 0.5, semigroup_apply(op, t, x));
            const double v = norm(y);
            return v * v;
        };
        const double quad = integrate_or_throw(integrand, 0.0, window, 1e-11, "obs energy");
        double closed = 0.0;
        for (int k = 0; k < 12; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            closed += x.c[ku] * x.c[ku] * (1.0 - std::exp(-2.0 * op.eigenvalue(k) * window)) / 2.0;
        }
        CHECK(quad == doctest::Approx(closed).epsilon(1e-8));
        const double xn = norm(x);
        CHECK(closed <= 0.5 * xn * xn * (1.0 + 1e-12));
    }
}

TEST_CASE("norms") {
    const auto op = SpectralOperator::dirichlet(16);
    const StateVector x = random_state(16, 3);
    SUBCASE("parseval") {
        double s = 0.0;
        for (double v : x.c) s += v * v;
        CHECK(norm(x) == doctest::Approx(std::sqrt(s)).epsilon(1e-14));
    }
    SUBCASE("extrapolation norm dominated by the resolvent operator norm") {
        const double mu = 1.0;
        CHECK(extrapolation_norm(op, x, mu) <= norm(x) / (mu + op.eigenvalue(0)) * (1.0 + 1e-12));
        // consistency with || R(mu, A) x ||
        CHECK(extrapolation_norm(op, x, mu) ==
              doctest::Approx(norm(resolvent_apply(op, mu, x))).epsilon(1e-13));
    }
    SUBCASE("graph norm finite and above the plain norm") {
        CHECK(std::isfinite(graph_norm(op, x)));
        CHECK(graph_norm(op, x) >= norm(x));
    }
}
