#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "volreg/boundary.hpp"
#include "volreg/errors.hpp"
#include "volreg/regularity.hpp"

using namespace volreg;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dirichlet lift") {
    const auto op = SpectralOperator::dirichlet(16);
    SUBCASE("lambda = 0 lift of constant data has the odd-mode coefficients") {
        const DirichletMap lift(op, 0.0);
        const StateVector d = lift.coefficients({1.0, 1.0});
        for (int k = 1; k <= 16; ++k) {
            const double expected = k % 2 == 1 ? 2.0 * std::sqrt(2.0) / (k * kPi) : 0.0;
            CHECK(d.c[static_cast<std::size_t>(k - 1)] ==
                  doctest::Approx(expected).epsilon(1e-13));
        }
        CHECK(lift.closed_form({1.0, 1.0}, 0.37) == doctest::Approx(1.0));
    }
    SUBCASE("zero data lifts to zero") {
        const DirichletMap lift(op, 0.0);
        CHECK(norm(lift.coefficients({0.0, 0.0})) == 0.0);
        CHECK(lift.closed_form({0.0, 0.0}, 0.5) == 0.0);
    }
    SUBCASE("boundary trace recovers the data for several resolvent points") {
        for (double lambda : {0.0, 0.5, 3.0, 25.0}) {
            const DirichletMap lift(op, lambda);
            const BoundaryPair u{0.3, -1.7};
            const BoundaryPair tr = lift.trace(u);
            CHECK(std::abs(tr[0] - u[0]) <= 1e-10);
            CHECK(std::abs(tr[1] - u[1]) <= 1e-10);
        }
    }
    SUBCASE("interior equation residual of the lift") {
        // lambda u - u'' = 0 for the closed form, via centered differences.
        const double lambda = 2.0;
        const DirichletMap lift(op, lambda);
        const BoundaryPair u{1.0, 0.5};
        const double h = 1e-4;
        for (double x : {0.25, 0.5, 0.75}) {
            const double upp = (lift.closed_form(u, x + h) - 2.0 * lift.closed_form(u, x) +
                                lift.closed_form(u, x - h)) /
                               (h * h);
            CHECK(std::abs(lambda * lift.closed_form(u, x) - upp) <= 1e-5);
        }
    }
    SUBCASE("negative lambda rejected") {
        CHECK_THROWS_AS(DirichletMap(op, -1.0), ValidationError);
    }
    SUBCASE("requires the dirichlet basis") {
        const auto neu = SpectralOperator::neumann(8);
        CHECK_THROWS_AS(DirichletMap(neu, 0.0), ValidationError);
    }
}

TEST_CASE("control coefficients") {
    const auto op = SpectralOperator::dirichlet(64);
    SUBCASE("independent of the resolvent point in the extrapolation norm") {
        const BoundaryPair u{1.0, 0.0};
        const StateVector b0 = control_coefficients(op, 0.0, u);
        const StateVector b1 = control_coefficients(op, 1.0, u);
        const StateVector diff = add(b0, scaled(b1, -1.0));
        CHECK(extrapolation_norm(op, diff, 1.0) <= 1e-9 * extrapolation_norm(op, b0, 1.0));
    }
    SUBCASE("zero data maps to zero") {
        CHECK(norm(control_coefficients(op, 0.0, {0.0, 0.0})) == 0.0);
    }
    SUBCASE("unbounded into X, bounded into the extrapolation space") {
        const BoundaryPair u{1.0, 0.0};
        double prev_x = 0.0;
        double prev_ext = 0.0;
        for (int n : {16, 32, 64}) {
            const auto opn = SpectralOperator::dirichlet(n);
            const StateVector b = control_coefficients(opn, 0.0, u);
            const double nx = norm(b);
            const double ne = extrapolation_norm(opn, b, 1.0);
            CHECK(nx > 1.4 * prev_x);  // partial sums grow like sqrt(N^3)
            if (prev_ext > 0.0) CHECK(std::abs(ne - prev_ext) <= 0.05 * prev_ext);
            prev_x = nx;
            prev_ext = ne;
        }
    }
}

TEST_CASE("input maps") {
    const auto op = SpectralOperator::dirichlet(32);
    SUBCASE("zero path maps to zero") {
        BoundaryPath zero;
        zero.value = [](double) -> BoundaryPair { return {0.0, 0.0}; };
        zero.deriv = [](double) -> BoundaryPair { return {0.0, 0.0}; };
        CHECK(norm(input_map(op, zero, 1.0)) == 0.0);
    }
    SUBCASE("dual formulas agree on a polynomial path") {
        BoundaryPath quad;
        quad.value = [](double s) -> BoundaryPair { return {s * s, 0.0}; };
        quad.deriv = [](double s) -> BoundaryPair { return {2.0 * s, 0.0}; };
        const StateVector a = input_map(op, quad, 1.0);
        const StateVector b = input_map_convolution(op, quad, 1.0);
        CHECK(norm(add(a, scaled(b, -1.0))) <= 1e-6);
    }
    SUBCASE("dual formulas agree on random smooth paths") {
        for (std::uint64_t seed : {4ull, 5ull, 6ull}) {
            const BoundaryPath path = random_smooth_path(seed);
            const StateVector a = input_map(op, path, 0.8);
            const StateVector b = input_map_convolution(op, path, 0.8);
            CHECK(norm(add(a, scaled(b, -1.0))) <= 1e-6 * std::max(1.0, norm(a)));
        }
    }
    SUBCASE("nonzero initial data rejected") {
        BoundaryPath bad;
        bad.value = [](double) -> BoundaryPair { return {1.0, 0.0}; };
        bad.deriv = [](double) -> BoundaryPair { return {0.0, 0.0}; };
        CHECK_THROWS_AS(input_map(op, bad, 1.0), ValidationError);
        BoundaryPath bad_deriv;
        bad_deriv.value = [](double s) -> BoundaryPair { return {s, 0.0}; };
        bad_deriv.deriv = [](double) -> BoundaryPair { return {1.0, 0.0}; };
        CHECK_THROWS_AS(input_map(op, bad_deriv, 1.0), ValidationError);
    }
}

TEST_CASE("boundary feedback solver") {
    const int n = 16;
    const auto op = SpectralOperator::dirichlet(n);
    const MemoryKernel kernel = MemoryKernel::exponential(1.0, 1.0);

    SUBCASE("zero feedback matches the interior solver") {
        BoundarySystem sys{op,
                           StateVector::zeros(n),
                           StateVector::zeros(n),
                           0.5,
                           kernel,
                           random_band_forcing(n, 3),
                           0.25,
                           5e-4};
        const BoundarySolveResult res = solve_boundary(sys);
        VolterraProblem prob{op, 0.5, kernel, random_band_forcing(n, 3), 0.25, 5e-4};
        const Trajectory interior = solve_augmented(prob);
        double worst = 0.0;
        for (std::size_t j = 0; j < interior.z.size(); ++j) {
            worst = std::max(worst, norm(add(res.traj.z[j], scaled(interior.z[j], -1.0))));
        }
        CHECK(worst <= 1e-8);
        CHECK(res.dissipative);
        for (const auto& bv : res.boundary_values) {
            CHECK(bv[0] == 0.0);
            CHECK(bv[1] == 0.0);
        }
    }

    SUBCASE("small feedback matches a dense eigen-decomposition oracle") {
        // beta = 0 and constant forcing admit the closed form
        // z(t) = V diag((e^{nu t} - 1)/nu) V^{-1} v.
        const double knorm = 0.1;
        BoundarySystem sys{op,
                           scaled(StateVector::basis(n, 0), knorm),
                           scaled(StateVector::basis(n, 1), knorm),
                           0.5,
                           MemoryKernel::exponential(0.0, 1.0),
                           Forcing(),
                           0.25,
                           2e-4};
        StateVector v = StateVector::zeros(n);
        for (int k = 0; k < 8; ++k) v.c[static_cast<std::size_t>(k)] = 1.0 / (k + 1);
        sys.forcing = constant_forcing(v);
        CHECK(sys.feedback_norm() == doctest::Approx(knorm).epsilon(1e-12));
        const BoundarySolveResult res = solve_boundary(sys);

        Eigen::MatrixXd a_pert = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) a_pert(i, i) = -op.eigenvalue(i);
        for (int i = 0; i < n; ++i) {
            const double kpi = (i + 1) * kPi;
            const double c0 = std::sqrt(2.0) * kpi;
            const double c1 = -std::sqrt(2.0) * kpi * ((i + 1) % 2 == 0 ? 1.0 : -1.0);
            a_pert(i, 0) += c0 * knorm;
            a_pert(i, 1) += c1 * knorm;
        }
        Eigen::VectorXd vv(n);
        for (int i = 0; i < n; ++i) vv(i) = v.c[static_cast<std::size_t>(i)];
        Eigen::EigenSolver<Eigen::MatrixXd> eig(a_pert);
        const Eigen::VectorXcd nu = eig.eigenvalues();
        const Eigen::MatrixXcd V = eig.eigenvectors();
        const Eigen::VectorXcd coeffs = V.partialPivLu().solve(vv.cast<std::complex<double>>());
        double worst = 0.0;
        for (int j = 0; j <= res.traj.steps(); j += 50) {
            const double t = res.traj.times[static_cast<std::size_t>(j)];
            Eigen::VectorXcd phase(n);
            for (int i = 0; i < n; ++i) {
                const std::complex<double> nui = nu(i);
                phase(i) = std::abs(nui) > 1e-12 ? (std::exp(nui * t) - 1.0) / nui
                                                 : std::complex<double>(t, 0.0);
            }
            const Eigen::VectorXcd zt = V * phase.cwiseProduct(coeffs);
            double gap2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d =
                    res.traj.z[static_cast<std::size_t>(j)].c[static_cast<std::size_t>(i)] -
                    zt(i).real();
                gap2 += d * d;
            }
            worst = std::max(worst, std::sqrt(gap2));
        }
        CHECK(worst <= 1e-6);
    }

    SUBCASE("ratio stability under mode doubling") {
        auto run_ratio = [&](int modes) {
            const Forcing inner = random_band_forcing(16, 8);
            const Forcing padded([=](double t, std::span<double> out) {
                std::fill(out.begin(), out.end(), 0.0);
                inner.eval(t, out.subspan(0, 16));
            });
            const auto opn = SpectralOperator::dirichlet(modes);
            BoundarySystem sys{opn,
                               scaled(StateVector::basis(modes, 0), 0.1),
                               scaled(StateVector::basis(modes, 1), 0.1),
                               0.5,
                               kernel,
                               padded,
                               0.25,
                               5e-4};
            const BoundarySolveResult res = solve_boundary(sys);
            const int m = res.traj.steps();
            std::vector<double> nz(static_cast<std::size_t>(m) + 1),
                nzd(static_cast<std::size_t>(m) + 1), nf(static_cast<std::size_t>(m) + 1);
            for (int j = 0; j <= m; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                nz[ju] = norm(res.traj.z[ju]);
                const StateVector f = sys.forcing.at(res.traj.times[ju], modes);
                nf[ju] = norm(f);
                // z' = A_m z + w + f
                nzd[ju] = norm(add(add(res.amz[ju], res.traj.w[ju]), f));
            }
            const double num = lp_time_norm(nzd, 2.0, res.traj.dt) +
                               lp_time_norm(res.norm_Amz, 2.0, res.traj.dt) +
                               lp_time_norm(nz, 2.0, res.traj.dt);
            return num / lp_time_norm(nf, 2.0, res.traj.dt);
        };
        const double r16 = run_ratio(16);
        const double r32 = run_ratio(32);
        CHECK(std::abs(r32 - r16) <= 0.05 * r16);
    }

    SUBCASE("validation") {
        BoundarySystem sys{op,
                           StateVector::zeros(n),
                           StateVector::zeros(n),
                           0.5,
                           MemoryKernel::monomial_exponential(1.0, 1.0, 1),
                           zero_forcing(),
                           0.25,
                           5e-4};
        CHECK_THROWS_AS(solve_boundary(sys), ValidationError);
    }
}

TEST_CASE("feedback triple probes on 100 seeded paths") {
    const int n = 16;
    const auto op = SpectralOperator::dirichlet(n);
    const StateVector k0 = scaled(StateVector::basis(n, 0), 0.1);
    const StateVector k1 = scaled(StateVector::basis(n, 1), 0.1);
    const FeedbackProbeReport rep = probe_feedback_triple(op, k0, k1, 2.0, 0.5, 100, 123);
    CHECK(rep.probes == 100);
    CHECK(rep.obs_gamma > 0.0);
    CHECK(rep.obs_gamma <= 0.1 * std::sqrt(0.5) * 1.01);  // bounded K: gamma <= ||K|| sqrt(T)-ish
    CHECK(rep.control_gain > 0.0);
    CHECK(std::isfinite(rep.control_gain));
    CHECK(rep.io_gain > 0.0);
    CHECK(std::isfinite(rep.io_gain));
}
