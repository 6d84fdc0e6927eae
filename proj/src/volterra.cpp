#include "volreg/volterra.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "volreg/errors.hpp"
#include "volreg/phi.hpp"
#include "volreg/quadrature.hpp"
#include "volreg/simd.hpp"

namespace volreg {

StateVector Forcing::at(double t, int n) const {
    StateVector x = StateVector::zeros(n);
    eval(t, x.c);
    return x;
}

Forcing zero_forcing() {
    return Forcing([](double, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    });
}

Forcing constant_forcing(StateVector v) {
    return Forcing([v = std::move(v)](double, std::span<double> out) {
        if (out.size() != v.c.size()) throw ValidationError("forcing: size mismatch");
        std::copy(v.c.begin(), v.c.end(), out.begin());
    });
}

Forcing single_mode_forcing(int n, int mode_index, double amplitude) {
    if (mode_index < 0 || mode_index >= n) {
        throw ValidationError("single_mode_forcing: mode index out of range");
    }
    StateVector v = StateVector::zeros(n);
    v.c[static_cast<std::size_t>(mode_index)] = amplitude;
    return constant_forcing(std::move(v));
}

Forcing random_band_forcing(int n, std::uint64_t seed) {
    const int band = std::max(1, n / 2);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> freq(0.0, 8.0);
    std::vector<double> amp_cos(static_cast<std::size_t>(band));
    std::vector<double> amp_sin(static_cast<std::size_t>(band));
    std::vector<double> omega(static_cast<std::size_t>(band));
    for (int k = 0; k < band; ++k) {
        amp_cos[static_cast<std::size_t>(k)] = gauss(rng);
        amp_sin[static_cast<std::size_t>(k)] = gauss(rng);
        omega[static_cast<std::size_t>(k)] = freq(rng);
    }
    return Forcing([=](double t, std::span<double> out) {
        if (static_cast<int>(out.size()) != n) throw ValidationError("forcing: size mismatch");
        std::fill(out.begin(), out.end(), 0.0);
        for (int k = 0; k < band; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            out[ku] = amp_cos[ku] * std::cos(omega[ku] * t) + amp_sin[ku] * std::sin(omega[ku] * t);
        }
    });
}

int VolterraProblem::steps() const {
    return static_cast<int>(std::llround(horizon / dt));
}

void VolterraProblem::validate() const {
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw ValidationError("VolterraProblem: alpha must lie in (0, 1/2]");
    }
    if (!(horizon > 0.0) || !(dt > 0.0)) {
        throw ValidationError("VolterraProblem: horizon and dt must be positive");
    }
    const int m = steps();
    if (m < 2 || std::abs(m * dt - horizon) > 1e-9 * horizon) {
        throw ValidationError("VolterraProblem: horizon must be an integral multiple (>= 2) of dt");
    }
}

namespace {

struct ModeCoefficients {
    // exp(h M_k) entries and h * phi1(h M_k) e_1 forcing weights per mode.
    std::vector<double> e11, e12, e21, e22, p1, p2;
};

// M_k = [[-lambda, 1], [beta lambda^alpha, -gamma]]; the 3x3 block trick
// exp([[X, e1],[0,0]]) = [[e^X, phi1(X) e1],[0,1]] yields both pieces.
ModeCoefficients build_mode_propagators(const SpectralOperator& op, double alpha, double beta,
                                        double gamma, double h) {
    const int n = op.modes();
    ModeCoefficients mc;
    mc.e11.resize(static_cast<std::size_t>(n));
    mc.e12.resize(static_cast<std::size_t>(n));
    mc.e21.resize(static_cast<std::size_t>(n));
    mc.e22.resize(static_cast<std::size_t>(n));
    mc.p1.resize(static_cast<std::size_t>(n));
    mc.p2.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double lam = op.eigenvalue(k);
        Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
        aug(0, 0) = -lam * h;
        aug(0, 1) = h;
        aug(1, 0) = beta * std::pow(lam, alpha) * h;
        aug(1, 1) = -gamma * h;
        aug(0, 2) = 1.0;
        const Eigen::Matrix3d E = aug.exp();
        const auto ku = static_cast<std::size_t>(k);
        mc.e11[ku] = E(0, 0);
        mc.e12[ku] = E(0, 1);
        mc.e21[ku] = E(1, 0);
        mc.e22[ku] = E(1, 1);
        mc.p1[ku] = h * E(0, 2);
        mc.p2[ku] = h * E(1, 2);
    }
    return mc;
}

}  // namespace

Trajectory solve_augmented(const VolterraProblem& prob) {
    prob.validate();
    if (prob.kernel.monomial_degree() != 0) {
        throw ValidationError(
            "solve_augmented: only the exponential kernel family admits the augmented-state "
            "form; use solve_cq for monomial-exponential kernels");
    }
    const int n = prob.op.modes();
    const int m = prob.steps();
    const double h = prob.dt;
    const ModeCoefficients mc =
        build_mode_propagators(prob.op, prob.alpha, prob.kernel.beta(), prob.kernel.gamma(), h);

    Trajectory traj;
    traj.dt = h;
    traj.times.resize(static_cast<std::size_t>(m) + 1);
    traj.z.reserve(static_cast<std::size_t>(m) + 1);
    traj.w.reserve(static_cast<std::size_t>(m) + 1);
    traj.z.push_back(StateVector::zeros(n));
    traj.w.push_back(StateVector::zeros(n));
    traj.times[0] = 0.0;

    StateVector g = StateVector::zeros(n);
    StateVector znext = StateVector::zeros(n);
    StateVector wnext = StateVector::zeros(n);
    for (int j = 0; j < m; ++j) {
        const double tmid = (j + 0.5) * h;
        prob.forcing.eval(tmid, g.c);
        const StateVector& zc = traj.z.back();
        const StateVector& wc = traj.w.back();
        simd::step2(znext.data(), wnext.data(), zc.data(), wc.data(), g.data(), mc.e11.data(),
                    mc.e12.data(), mc.p1.data(), mc.e21.data(), mc.e22.data(), mc.p2.data(),
                    static_cast<std::size_t>(n));
        traj.z.push_back(znext);
        traj.w.push_back(wnext);
        traj.times[static_cast<std::size_t>(j) + 1] = (j + 1) * h;
    }
    return traj;
}

Trajectory solve_cq(const VolterraProblem& prob) {
    prob.validate();
    const int n = prob.op.modes();
    const int m = prob.steps();
    const double h = prob.dt;
    const auto nu = static_cast<std::size_t>(n);

    std::vector<double> decay(nu), w1(nu), w2(nu), frac(nu);
    double stiff_coupling = 0.0;
    for (int k = 0; k < n; ++k) {
        const double lam = prob.op.eigenvalue(k);
        const auto ku = static_cast<std::size_t>(k);
        decay[ku] = std::exp(-lam * h);
        w1[ku] = h * phi1(-lam * h);
        w2[ku] = h * phi2(-lam * h);
        frac[ku] = std::pow(lam, prob.alpha);
        stiff_coupling = std::max(stiff_coupling,
                                  w2[ku] * 0.5 * h * std::abs(prob.kernel.eval_real(0.0)) * frac[ku]);
    }
    if (stiff_coupling >= 1.0) {
        throw NumericalError(
            "solve_cq: explicit memory closure is unstable for this mode-count/step pairing; "
            "reduce dt (coupling factor " + std::to_string(stiff_coupling) + ")");
    }

    std::vector<double> aval(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) aval[static_cast<std::size_t>(j)] = prob.kernel.eval_real(j * h);

    Trajectory traj;
    traj.dt = h;
    traj.times.resize(static_cast<std::size_t>(m) + 1);
    traj.times[0] = 0.0;
    traj.z.reserve(static_cast<std::size_t>(m) + 1);
    traj.w.reserve(static_cast<std::size_t>(m) + 1);
    traj.z.push_back(StateVector::zeros(n));
    traj.w.push_back(StateVector::zeros(n));

    // Contiguous history of (-A)^alpha z_i rows for the convolution sums.
    std::vector<double> fz(static_cast<std::size_t>(m + 1) * nu, 0.0);

    std::vector<double> conv(nu), gj(nu), gnext(nu), fj(nu), fnext(nu), zs(nu), znext(nu);
    prob.forcing.eval(0.0, fj);
    for (std::size_t k = 0; k < nu; ++k) gj[k] = fj[k];  // w_0 = 0

    for (int j = 0; j < m; ++j) {
        // Product-trapezoid sum over settled history for w(t_{j+1}); the i = 0
        // term vanishes with z(0) = 0 and the i = j+1 endpoint is closed below.
        std::fill(conv.begin(), conv.end(), 0.0);
        for (int i = 1; i <= j; ++i) {
            const double c = h * aval[static_cast<std::size_t>(j + 1 - i)];
            simd::axpy(conv.data(), c, fz.data() + static_cast<std::size_t>(i) * nu, nu);
        }
        prob.forcing.eval((j + 1) * h, fnext);

        const StateVector& zc = traj.z.back();
        const double half_a0 = 0.5 * h * aval[0];

        // Predictor: exponential Euler with the current slope.
        for (std::size_t k = 0; k < nu; ++k) zs[k] = decay[k] * zc.c[k] + w1[k] * gj[k];
        // Corrector: ETD trapezoidal using the predicted endpoint memory.
        for (std::size_t k = 0; k < nu; ++k) {
            const double w_pred = conv[k] + half_a0 * frac[k] * zs[k];
            const double g_pred = w_pred + fnext[k];
            znext[k] = decay[k] * zc.c[k] + w1[k] * gj[k] + w2[k] * (g_pred - gj[k]);
        }

        StateVector zrec(std::vector<double>(znext.begin(), znext.end()));
        StateVector wrec = StateVector::zeros(n);
        double* fz_row = fz.data() + static_cast<std::size_t>(j + 1) * nu;
        for (std::size_t k = 0; k < nu; ++k) {
            fz_row[k] = frac[k] * znext[k];
            wrec.c[k] = conv[k] + half_a0 * fz_row[k];
            gnext[k] = wrec.c[k] + fnext[k];
        }
        traj.z.push_back(std::move(zrec));
        traj.w.push_back(std::move(wrec));
        traj.times[static_cast<std::size_t>(j) + 1] = (j + 1) * h;
        std::swap(gj, gnext);
        std::swap(fj, fnext);
    }
    return traj;
}

StateVector equation_zdot(const VolterraProblem& prob, const Trajectory& traj, int j) {
    if (j < 0 || j >= static_cast<int>(traj.times.size())) {
        throw ValidationError("equation_zdot: index out of range");
    }
    const auto ju = static_cast<std::size_t>(j);
    StateVector out = prob.forcing.at(traj.times[ju], prob.op.modes());
    const StateVector az = generator_apply(prob.op, traj.z[ju]);
    simd::axpy(out.data(), 1.0, az.data(), out.c.size());
    simd::axpy(out.data(), 1.0, traj.w[ju].data(), out.c.size());
    return out;
}

double residual(const VolterraProblem& prob, const Trajectory& traj) {
    const int m = traj.steps();
    if (m != prob.steps() || std::abs(traj.dt - prob.dt) > 1e-12 * prob.dt) {
        throw ValidationError("residual: trajectory grid does not match the problem grid");
    }
    const auto nu = static_cast<std::size_t>(prob.op.modes());
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
        rows[static_cast<std::size_t>(j)] = equation_zdot(prob, traj, j).c;
    }
    std::vector<std::vector<double>> cumulative;
    cumulative_simpson(rows, traj.dt, cumulative);
    double worst = 0.0;
    std::vector<double> diff(nu);
    for (int j = 0; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        for (std::size_t k = 0; k < nu; ++k) diff[k] = traj.z[ju].c[k] - cumulative[ju][k];
        worst = std::max(worst, std::sqrt(simd::dot(diff.data(), diff.data(), nu)));
    }
    return worst;
}

}  // namespace volreg
