#include "volreg/boundary.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "volreg/errors.hpp"
#include "volreg/phi.hpp"
#include "volreg/quadrature.hpp"
#include "volreg/regularity.hpp"

namespace volreg {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_dirichlet(const SpectralOperator& op, const char* where) {
    if (op.boundary() != BoundaryKind::dirichlet) {
        throw ValidationError(std::string(where) + ": requires the Dirichlet basis");
    }
}

double sign_pm(int k) { return k % 2 == 0 ? 1.0 : -1.0; }  // (-1)^k, k one-based outside

/// sqrt(2) k pi (u0 - (-1)^k u1), the lambda-free control coefficient.
double control_coefficient(int k_one_based, BoundaryPair u) {
    const double kpi = k_one_based * std::numbers::pi;
    return kSqrt2 * kpi * (u[0] - sign_pm(k_one_based) * u[1]);
}

/// Coefficients of the zero-resolvent lift (the linear interpolant).
double lift0_coefficient(int k_one_based, BoundaryPair u) {
    const double kpi = k_one_based * std::numbers::pi;
    return kSqrt2 * (u[0] - sign_pm(k_one_based) * u[1]) / kpi;
}

}  // namespace

DirichletMap::DirichletMap(const SpectralOperator& op, double lambda) : op_(&op), lambda_(lambda) {
    require_dirichlet(op, "DirichletMap");
    if (lambda < 0.0) throw ValidationError("DirichletMap: lambda must be nonnegative");
    for (int k = 0; k < op.modes(); ++k) {
        if (lambda == -op.eigenvalue(k)) {
            throw ValidationError("DirichletMap: lambda lies in the spectrum");
        }
    }
}

double DirichletMap::closed_form(BoundaryPair u, double x) const {
    if (x < 0.0 || x > 1.0) throw ValidationError("DirichletMap: x must lie in [0, 1]");
    if (lambda_ == 0.0) return u[0] + (u[1] - u[0]) * x;
    const double r = std::sqrt(lambda_);
    const double denom = std::sinh(r);
    return (u[0] * std::sinh(r * (1.0 - x)) + u[1] * std::sinh(r * x)) / denom;
}

BoundaryPair DirichletMap::trace(BoundaryPair u) const {
    return {closed_form(u, 0.0), closed_form(u, 1.0)};
}

StateVector DirichletMap::coefficients(BoundaryPair u) const {
    const int n = op_->modes();
    StateVector d = StateVector::zeros(n);
    for (int k = 1; k <= n; ++k) {
        const auto ku = static_cast<std::size_t>(k - 1);
        if (lambda_ == 0.0) {
            d.c[ku] = lift0_coefficient(k, u);
        } else {
            d.c[ku] = control_coefficient(k, u) / (lambda_ + op_->eigenvalue(k - 1));
        }
    }
    return d;
}

StateVector control_coefficients(const SpectralOperator& op, double lambda, BoundaryPair u) {
    DirichletMap lift(op, lambda);
    StateVector b = lift.coefficients(u);
    for (int k = 0; k < op.modes(); ++k) {
        b.c[static_cast<std::size_t>(k)] *= lambda + op.eigenvalue(k);
    }
    return b;
}

BoundaryPath random_smooth_path(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> freq(0.0, 6.0);
    const double a0 = gauss(rng), b0 = gauss(rng), w0 = freq(rng);
    const double a1 = gauss(rng), b1 = gauss(rng), w1 = freq(rng);
    BoundaryPath path;
    path.value = [=](double s) -> BoundaryPair {
        return {s * s * (a0 * std::cos(w0 * s) + b0 * std::sin(w0 * s)),
                s * s * (a1 * std::cos(w1 * s) + b1 * std::sin(w1 * s))};
    };
    path.deriv = [=](double s) -> BoundaryPair {
        return {2.0 * s * (a0 * std::cos(w0 * s) + b0 * std::sin(w0 * s)) +
                    s * s * w0 * (-a0 * std::sin(w0 * s) + b0 * std::cos(w0 * s)),
                2.0 * s * (a1 * std::cos(w1 * s) + b1 * std::sin(w1 * s)) +
                    s * s * w1 * (-a1 * std::sin(w1 * s) + b1 * std::cos(w1 * s))};
    };
    return path;
}

namespace {

void check_zero_initial_data(const BoundaryPath& u, double t) {
    const BoundaryPair v0 = u.value(0.0);
    const BoundaryPair d0 = u.deriv(0.0);
    const BoundaryPair vt = u.value(t);
    const double scale = 1.0 + std::abs(vt[0]) + std::abs(vt[1]);
    if (std::abs(v0[0]) > 1e-10 * scale || std::abs(v0[1]) > 1e-10 * scale ||
        std::abs(d0[0]) > 1e-10 * scale || std::abs(d0[1]) > 1e-10 * scale) {
        throw ValidationError("input_map: path must satisfy u(0) = u'(0) = 0");
    }
}

constexpr int kConvolutionSubsteps = 512;  // even; two substeps per panel

/// integral_0^t e^{-lambda (t-s)} g(s) ds by product Simpson: g is replaced
/// by its quadratic interpolant on each panel and integrated against the
/// exponential weight exactly, so the accuracy is uniform in lambda.
double exp_convolution(double lambda, double t, std::span<const double> g) {
    const int m = kConvolutionSubsteps;
    const double h = t / m;
    const double big = 2.0 * h;
    const double c = lambda * big;
    // Exponential moments over one panel of width 2h:
    //   M_i = integral_0^{2h} e^{-lambda (2h - xi)} xi^i d xi.
    const double m0 = big * phi1(-c);
    const double m1 = big * big * phi2(-c);
    const double m2 = 2.0 * big * big * big * phi3(-c);
    // Lagrange-basis weights of the panel nodes (xi = 0, h, 2h).
    const double w0 = (m2 - 3.0 * h * m1 + 2.0 * h * h * m0) / (2.0 * h * h);
    const double w1 = (2.0 * h * m1 - m2) / (h * h);
    const double w2 = (m2 - h * m1) / (2.0 * h * h);

    const double decay = std::exp(-c);
    double rho = 1.0;  // e^{-lambda (t - panel end)}, walked backward
    double acc = 0.0;
    for (int i = m / 2 - 1; i >= 0; --i) {
        const auto j = static_cast<std::size_t>(2 * i);
        acc += rho * (w0 * g[j] + w1 * g[j + 1] + w2 * g[j + 2]);
        rho *= decay;
        if (rho == 0.0) break;  // remaining panels are annihilated
    }
    return acc;
}

struct PathSamples {
    double t = 0.0;
    std::vector<double> ch0, ch1;  // component samples at the substep nodes
};

PathSamples sample_path(const std::function<BoundaryPair(double)>& f, double t) {
    PathSamples s;
    s.t = t;
    s.ch0.resize(kConvolutionSubsteps + 1);
    s.ch1.resize(kConvolutionSubsteps + 1);
    for (int i = 0; i <= kConvolutionSubsteps; ++i) {
        const BoundaryPair v = f(t * i / kConvolutionSubsteps);
        s.ch0[static_cast<std::size_t>(i)] = v[0];
        s.ch1[static_cast<std::size_t>(i)] = v[1];
    }
    return s;
}

}  // namespace

StateVector input_map(const SpectralOperator& op, const BoundaryPath& u, double t) {
    require_dirichlet(op, "input_map");
    if (!(t >= 0.0)) throw ValidationError("input_map: t must be nonnegative");
    check_zero_initial_data(u, std::max(t, 1.0));
    const int n = op.modes();
    StateVector out = StateVector::zeros(n);
    if (t == 0.0) return out;
    const BoundaryPair ut = u.value(t);
    const PathSamples dsamples = sample_path(u.deriv, t);
    for (int k = 1; k <= n; ++k) {
        const double lam = op.eigenvalue(k - 1);
        const double conv0 = exp_convolution(lam, t, dsamples.ch0);
        const double conv1 = exp_convolution(lam, t, dsamples.ch1);
        const double conv = lift0_coefficient(k, {conv0, conv1});
        out.c[static_cast<std::size_t>(k - 1)] = lift0_coefficient(k, ut) - conv;
    }
    return out;
}

StateVector input_map_convolution(const SpectralOperator& op, const BoundaryPath& u, double t) {
    require_dirichlet(op, "input_map_convolution");
    if (!(t >= 0.0)) throw ValidationError("input_map_convolution: t must be nonnegative");
    check_zero_initial_data(u, std::max(t, 1.0));
    const int n = op.modes();
    StateVector out = StateVector::zeros(n);
    if (t == 0.0) return out;
    const PathSamples vsamples = sample_path(u.value, t);
    for (int k = 1; k <= n; ++k) {
        const double lam = op.eigenvalue(k - 1);
        const double conv0 = exp_convolution(lam, t, vsamples.ch0);
        const double conv1 = exp_convolution(lam, t, vsamples.ch1);
        out.c[static_cast<std::size_t>(k - 1)] = control_coefficient(k, {conv0, conv1});
    }
    return out;
}

int BoundarySystem::steps() const { return static_cast<int>(std::llround(horizon / dt)); }

void BoundarySystem::validate() const {
    require_dirichlet(op, "BoundarySystem");
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw ValidationError("BoundarySystem: alpha must lie in (0, 1/2]");
    }
    if (kernel.monomial_degree() != 0) {
        throw ValidationError("BoundarySystem: boundary solver supports the exponential family only");
    }
    if (k0.size() != op.modes() || k1.size() != op.modes()) {
        throw ValidationError("BoundarySystem: representer size does not match mode count");
    }
    if (!(horizon > 0.0) || !(dt > 0.0)) {
        throw ValidationError("BoundarySystem: horizon and dt must be positive");
    }
    const int m = steps();
    if (m < 2 || std::abs(m * dt - horizon) > 1e-9 * horizon) {
        throw ValidationError("BoundarySystem: horizon must be an integral multiple (>= 2) of dt");
    }
}

double BoundarySystem::feedback_norm() const {
    const double g00 = inner(k0, k0);
    const double g01 = inner(k0, k1);
    const double g11 = inner(k1, k1);
    const double mean = 0.5 * (g00 + g11);
    const double disc = std::sqrt(std::max(0.0, mean * mean - (g00 * g11 - g01 * g01)));
    return std::sqrt(std::max(0.0, mean + disc));
}

BoundarySolveResult solve_boundary(const BoundarySystem& sys) {
    sys.validate();
    const int n = sys.op.modes();
    const int m = sys.steps();
    const double h = sys.dt;
    const double beta = sys.kernel.beta();
    const double gamma = sys.kernel.gamma();

    Eigen::MatrixXd a_pert = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a_pert(i, i) = -sys.op.eigenvalue(i);
    for (int i = 0; i < n; ++i) {
        const double c0 = control_coefficient(i + 1, {1.0, 0.0});
        const double c1 = control_coefficient(i + 1, {0.0, 1.0});
        for (int j = 0; j < n; ++j) {
            a_pert(i, j) += c0 * sys.k0.c[static_cast<std::size_t>(j)] +
                            c1 * sys.k1.c[static_cast<std::size_t>(j)];
        }
    }

    BoundarySolveResult res;
    {
        Eigen::EigenSolver<Eigen::MatrixXd> eig(a_pert, false);
        res.spectral_abscissa = eig.eigenvalues().real().maxCoeff();
        res.dissipative = res.spectral_abscissa < 0.0;
        if (!res.dissipative) {
            std::fprintf(stderr,
                         "solve_boundary: perturbed generator has spectral abscissa %.6g >= 0 at "
                         "truncation level %d\n",
                         res.spectral_abscissa, n);
        }
    }

    // Coupled block generator M = [[A + BK, I], [beta (-A)^alpha, -gamma I]];
    // exp(hM) and phi1(hM) arrive together from one augmented exponential.
    const int d = 2 * n;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    block.topLeftCorner(n, n) = h * a_pert;
    for (int i = 0; i < n; ++i) {
        block(i, n + i) = h;
        block(n + i, i) = h * beta * std::pow(sys.op.eigenvalue(i), sys.alpha);
        block(n + i, n + i) = -h * gamma;
    }
    for (int i = 0; i < d; ++i) block(i, d + i) = 1.0;
    const Eigen::MatrixXd big = block.exp();
    const Eigen::MatrixXd propagator = big.topLeftCorner(d, d);
    const Eigen::MatrixXd forcing_weight = h * big.block(0, d, d, n);  // h phi1(hM) e_z-slot

    Eigen::VectorXd state = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd fmid(n);
    std::vector<double> fbuf(static_cast<std::size_t>(n));

    res.traj.dt = h;
    res.traj.times.resize(static_cast<std::size_t>(m) + 1);
    res.traj.z.reserve(static_cast<std::size_t>(m) + 1);
    res.traj.w.reserve(static_cast<std::size_t>(m) + 1);
    res.amz.reserve(static_cast<std::size_t>(m) + 1);
    res.norm_Amz.resize(static_cast<std::size_t>(m) + 1);
    res.boundary_values.resize(static_cast<std::size_t>(m) + 1);

    auto record = [&](int j) {
        StateVector z = StateVector::zeros(n);
        StateVector w = StateVector::zeros(n);
        StateVector amz = StateVector::zeros(n);
        // A_m z = z' - w - f = (A + BK) z at the truncated level.
        const Eigen::VectorXd az = a_pert * state.head(n);
        for (int i = 0; i < n; ++i) {
            z.c[static_cast<std::size_t>(i)] = state(i);
            w.c[static_cast<std::size_t>(i)] = state(n + i);
            amz.c[static_cast<std::size_t>(i)] = az(i);
        }
        const auto ju = static_cast<std::size_t>(j);
        res.traj.times[ju] = j * h;
        res.norm_Amz[ju] = az.norm();
        res.boundary_values[ju] = {inner(z, sys.k0), inner(z, sys.k1)};
        res.traj.z.push_back(std::move(z));
        res.traj.w.push_back(std::move(w));
        res.amz.push_back(std::move(amz));
    };

    record(0);
    for (int j = 0; j < m; ++j) {
        sys.forcing.eval((j + 0.5) * h, fbuf);
        for (int i = 0; i < n; ++i) fmid(i) = fbuf[static_cast<std::size_t>(i)];
        state = propagator * state + forcing_weight * fmid;
        record(j + 1);
    }
    return res;
}

FeedbackProbeReport probe_feedback_triple(const SpectralOperator& op, const StateVector& k0,
                                          const StateVector& k1, double p, double t, int probes,
                                          std::uint64_t seed) {
    require_dirichlet(op, "probe_feedback_triple");
    if (probes < 1) throw ValidationError("probe_feedback_triple: need at least one probe");
    if (!(t > 0.0)) throw ValidationError("probe_feedback_triple: window must be positive");

    FeedbackProbeReport rep;
    rep.probes = probes;
    const Observation k_obs = bounded_observation("K", {k0, k1});
    rep.obs_gamma = admissibility_constant(op, k_obs, p, t, 32, seed).gamma_hat;

    const int tau_samples = 32;  // grid for the io-map L^p norm
    for (int i = 0; i < probes; ++i) {
        const BoundaryPath path = random_smooth_path(seed + 1000 + static_cast<std::uint64_t>(i));
        auto unorm2 = [&](double s) {
            const BoundaryPair v = path.value(s);
            return v[0] * v[0] + v[1] * v[1];
        };
        const double u_l2 = std::sqrt(integrate_or_throw(unorm2, 0.0, t, 1e-10, "path L2 norm"));
        const double phi_norm = norm(input_map(op, path, t));
        if (u_l2 > 0.0) rep.control_gain = std::max(rep.control_gain, phi_norm / u_l2);

        std::vector<double> io_samples(tau_samples + 1);
        for (int j = 0; j <= tau_samples; ++j) {
            const double tau = t * j / tau_samples;
            if (j == 0) {
                io_samples[static_cast<std::size_t>(j)] = 0.0;
                continue;
            }
            const StateVector phi = input_map(op, path, tau);
            const double y0 = inner(phi, k0);
            const double y1 = inner(phi, k1);
            io_samples[static_cast<std::size_t>(j)] = std::sqrt(y0 * y0 + y1 * y1);
        }
        const double io_lp = lp_time_norm(io_samples, p, t / tau_samples);
        auto unorm_p = [&](double s) { return std::pow(unorm2(s), 0.5 * p); };
        const double u_lp =
            std::pow(integrate_or_throw(unorm_p, 0.0, t, 1e-10, "path Lp norm"), 1.0 / p);
        if (u_lp > 0.0) rep.io_gain = std::max(rep.io_gain, io_lp / u_lp);
    }
    return rep;
}

}  // namespace volreg
