#include "volreg/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "volreg/bergman.hpp"
#include "volreg/errors.hpp"
#include "volreg/parallel.hpp"
#include "volreg/quadrature.hpp"

namespace volreg {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (i + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

StateVector random_unit_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector x = StateVector::zeros(n);
    for (auto& v : x.c) v = gauss(rng);
    const double nrm = norm(x);
    if (nrm > 0.0) {
        for (auto& v : x.c) v /= nrm;
    } else {
        x.c[0] = 1.0;
    }
    return x;
}

}  // namespace

double lp_time_norm(std::span<const double> sample_norms, double p, double dt) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("lp_time_norm: p must lie in (1, inf)");
    if (sample_norms.size() < 3) throw ValidationError("lp_time_norm: need at least 3 samples");
    std::vector<double> powed(sample_norms.size());
    for (std::size_t i = 0; i < sample_norms.size(); ++i) {
        powed[i] = std::pow(std::abs(sample_norms[i]), p);
    }
    return std::pow(composite_simpson(powed, dt), 1.0 / p);
}

double lp_time_norm(const std::vector<StateVector>& samples, double p, double dt) {
    std::vector<double> norms(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) norms[i] = norm(samples[i]);
    return lp_time_norm(norms, p, dt);
}

double Observation::output_norm(const StateVector& x) const {
    std::vector<double> y(static_cast<std::size_t>(out_dim));
    apply(x, y);
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

Observation frac_power_observation(const SpectralOperator& op, double alpha_pow) {
    if (!(alpha_pow > 0.0 && alpha_pow <= 1.0)) {
        throw ValidationError("frac_power_observation: alpha must lie in (0, 1]");
    }
    std::vector<double> factors(static_cast<std::size_t>(op.modes()));
    for (int k = 0; k < op.modes(); ++k) {
        factors[static_cast<std::size_t>(k)] = std::pow(op.eigenvalue(k), alpha_pow);
    }
    Observation obs;
    char tag[48];
    std::snprintf(tag, sizeof(tag), "frac_power(%g)", alpha_pow);
    obs.tag = tag;
    obs.out_dim = op.modes();
    obs.apply = [factors = std::move(factors)](const StateVector& x, std::span<double> y) {
        for (std::size_t k = 0; k < factors.size(); ++k) y[k] = factors[k] * x.c[k];
    };
    return obs;
}

Observation bounded_observation(std::string tag, std::vector<StateVector> representers) {
    if (representers.empty()) throw ValidationError("bounded_observation: need representers");
    Observation obs;
    obs.tag = std::move(tag);
    obs.out_dim = static_cast<int>(representers.size());
    obs.apply = [reps = std::move(representers)](const StateVector& x, std::span<double> y) {
        for (std::size_t i = 0; i < reps.size(); ++i) y[i] = inner(x, reps[i]);
    };
    return obs;
}

Observation zero_observation(int n) {
    return bounded_observation("zero", {StateVector::zeros(n)});
}

namespace {

// (int_0^window ||C T(t) x||^p dt)^{1/p} by adaptive quadrature.
double output_energy(const SpectralOperator& op, const Observation& obs, const StateVector& x,
                     double p, double window) {
    auto integrand = [&](double t) {
        return std::pow(obs.output_norm(semigroup_apply(op, t, x)), p);
    };
    return std::pow(integrate_or_throw(integrand, 0.0, window, 1e-10, "admissibility"), 1.0 / p);
}

}  // namespace

AdmissibilityReport admissibility_constant(const SpectralOperator& op, const Observation& obs,
                                           double p, double window, int random_probes,
                                           std::uint64_t seed) {
    if (!(p > 1.0)) throw ValidationError("admissibility_constant: p must exceed 1");
    if (!(window > 0.0)) throw ValidationError("admissibility_constant: window must be positive");
    const int n = op.modes();
    AdmissibilityReport rep;
    rep.p = p;
    rep.window = window;
    rep.operator_tag = obs.tag;

    std::vector<StateVector> probes;
    std::vector<std::string> labels;
    for (int k = 0; k < n; ++k) {
        probes.push_back(StateVector::basis(n, k));
        labels.push_back("basis_" + std::to_string(k + 1));
    }
    std::mt19937_64 rng(seed);
    for (int i = 0; i < random_probes; ++i) {
        probes.push_back(random_unit_state(n, rng));
        labels.push_back("random_" + std::to_string(i));
    }

    std::vector<double> energy(probes.size());
    parallel_for(static_cast<int>(probes.size()), [&](int i) {
        energy[static_cast<std::size_t>(i)] =
            output_energy(op, obs, probes[static_cast<std::size_t>(i)], p, window);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < energy.size(); ++i) {
        if (energy[i] > energy[best]) best = i;
    }
    rep.gamma_hat = energy[best];
    rep.attaining = labels[best];
    rep.samples = static_cast<int>(probes.size());
    return rep;
}

PerturbationBoundReport check_perturbation_bound(const MemoryKernel& a,
                                                 const SpectralOperator& op, double alpha_pow,
                                                 double p, double q, double theta, double window,
                                                 int pairs, std::uint64_t seed) {
    if (!(q > 2.0)) throw ValidationError("check_perturbation_bound: q must exceed 2");
    if (pairs < 1) throw ValidationError("check_perturbation_bound: need at least one pair");
    const int n = op.modes();
    const double a_norm = bergman_norm(a, {theta, q});
    const Observation obs = frac_power_observation(op, alpha_pow);
    const double gamma_hat = admissibility_constant(op, obs, p, window, 32, seed).gamma_hat;

    PerturbationBoundReport rep;
    rep.p = p;
    rep.window = window;
    rep.gamma_hat = gamma_hat;
    rep.kernel_norm = a_norm;
    rep.samples = pairs;

    std::mt19937_64 rng(mix_seed(seed, 77));
    std::uniform_real_distribution<double> unif(0.5, 3.0);
    std::vector<double> ratios(static_cast<std::size_t>(pairs));

    struct Pair {
        StateVector x;
        MemoryKernel profile;
        StateVector direction;
        bool zero_x = false;
        bool zero_f = false;
    };
    std::vector<Pair> probes;
    probes.reserve(static_cast<std::size_t>(pairs));
    for (int i = 0; i < pairs; ++i) {
        Pair pr{StateVector::zeros(n), MemoryKernel::exponential(unif(rng), unif(rng)),
                StateVector::zeros(n)};
        if (i == 0) {
            pr.zero_x = true;  // pure history probe
            pr.direction = random_unit_state(n, rng);
        } else if (i == 1) {
            pr.zero_f = true;  // pure state probe
            pr.x = StateVector::basis(n, 0);
        } else {
            pr.x = random_unit_state(n, rng);
            pr.direction = random_unit_state(n, rng);
        }
        probes.push_back(std::move(pr));
    }

    parallel_for(pairs, [&](int i) {
        const Pair& pr = probes[static_cast<std::size_t>(i)];
        const double ynorm = pr.zero_f ? 0.0 : norm(pr.direction);
        auto lhs_integrand = [&](double t) {
            const double f_part = pr.zero_f ? 0.0 : std::abs(pr.profile.eval_real(t)) * ynorm;
            const double x_part =
                pr.zero_x ? 0.0 : a_norm * obs.output_norm(semigroup_apply(op, t, pr.x));
            return std::pow(f_part + x_part, p);
        };
        const double lhs = integrate_or_throw(lhs_integrand, 0.0, window, 1e-10, "perturbation lhs");
        double f_energy = 0.0;
        if (!pr.zero_f) {
            auto f_int = [&](double t) {
                return std::pow(std::abs(pr.profile.eval_real(t)) * ynorm, p);
            };
            f_energy = integrate_or_throw(f_int, 0.0, window, 1e-10, "perturbation f term");
        }
        const double xnorm = norm(pr.x);
        const double rhs = std::pow(2.0, p - 1.0) *
                           (std::pow(a_norm * gamma_hat * xnorm, p) + f_energy);
        ratios[static_cast<std::size_t>(i)] = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
    });

    for (double r : ratios) {
        rep.max_ratio = std::max(rep.max_ratio, r);
        if (r > 1.0 + 1e-9) ++rep.violations;
    }
    return rep;
}

TraceBoundResult memory_trace_bound(const VolterraProblem& prob, const Trajectory& traj,
                                    double p, double q, double theta) {
    if (!(q > 2.0 * p)) {
        throw ValidationError("memory_trace_bound: requires q > 2p so that s = q/(q-p) lies in (1,2)");
    }
    const double s = q / (q - p);
    const EmbeddingParams params = EmbeddingParams::with_default_angle(s, q, theta);
    const double T = prob.horizon;

    TraceBoundResult res;
    res.embedding_c = embedding_constant(params, T);
    res.kernel_norm = bergman_norm(prob.kernel, {theta, q});
    res.lhs = lp_time_norm(traj.w, p, traj.dt);

    std::vector<StateVector> fz(traj.z.size());
    for (std::size_t j = 0; j < traj.z.size(); ++j) {
        fz[j] = fractional_power_apply(prob.op, prob.alpha, traj.z[j]);
    }
    const double fz_norm = lp_time_norm(fz, p, traj.dt);
    res.rhs = std::pow(T, (p - 1.0) / p) * res.embedding_c * res.kernel_norm * fz_norm;
    return res;
}

RegularityReport verify_max_regularity(const VolterraProblem& base, double p, int ensemble,
                                       std::uint64_t seed, double q, double theta) {
    if (!(p > 1.0 && p <= 2.0)) {
        throw ValidationError(
            "verify_max_regularity: p must lie in (1, 2], the admissibility range of the "
            "fractional-power observation");
    }
    if (ensemble < 1) throw ValidationError("verify_max_regularity: ensemble must be positive");
    if (!(q > 2.0 * p)) throw ValidationError("verify_max_regularity: requires q > 2p");
    base.validate();

    const int n = base.op.modes();
    const int m = base.steps();
    RegularityReport rep;
    rep.p = p;
    rep.T = base.horizon;
    rep.ensemble = ensemble;
    rep.seed = seed;
    rep.norm_zdot.resize(static_cast<std::size_t>(ensemble));
    rep.norm_Az.resize(static_cast<std::size_t>(ensemble));
    rep.norm_z.resize(static_cast<std::size_t>(ensemble));
    rep.norm_f.resize(static_cast<std::size_t>(ensemble));
    rep.ratio.resize(static_cast<std::size_t>(ensemble));

    const bool exponential = base.kernel.monomial_degree() == 0;
    parallel_for(ensemble, [&](int i) {
        VolterraProblem prob = base;
        prob.forcing = random_band_forcing(n, mix_seed(seed, static_cast<std::uint64_t>(i)));
        Trajectory traj;
        try {
            traj = exponential ? solve_augmented(prob) : solve_cq(prob);
        } catch (const NumericalError& e) {
            throw NumericalError("ensemble sample " + std::to_string(i) + ": " + e.what());
        }
        std::vector<double> nz(static_cast<std::size_t>(m) + 1);
        std::vector<double> naz(static_cast<std::size_t>(m) + 1);
        std::vector<double> nzdot(static_cast<std::size_t>(m) + 1);
        std::vector<double> nf(static_cast<std::size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            nz[ju] = norm(traj.z[ju]);
            naz[ju] = norm(generator_apply(prob.op, traj.z[ju]));
            nzdot[ju] = norm(equation_zdot(prob, traj, j));
            nf[ju] = norm(prob.forcing.at(traj.times[ju], n));
        }
        const auto iu = static_cast<std::size_t>(i);
        rep.norm_z[iu] = lp_time_norm(nz, p, traj.dt);
        rep.norm_Az[iu] = lp_time_norm(naz, p, traj.dt);
        rep.norm_zdot[iu] = lp_time_norm(nzdot, p, traj.dt);
        rep.norm_f[iu] = lp_time_norm(nf, p, traj.dt);
        rep.ratio[iu] = rep.norm_f[iu] > 0.0
                            ? (rep.norm_zdot[iu] + rep.norm_Az[iu] + rep.norm_z[iu]) / rep.norm_f[iu]
                            : std::numeric_limits<double>::quiet_NaN();
    });

    double sum = 0.0;
    int counted = 0;
    for (double r : rep.ratio) {
        if (!std::isfinite(r)) continue;
        rep.ratio_max = std::max(rep.ratio_max, r);
        sum += r;
        ++counted;
    }
    rep.ratio_mean = counted > 0 ? sum / counted : 0.0;

    // Smallness chain at the horizon T.
    const Observation obs = frac_power_observation(base.op, base.alpha);
    rep.gamma_T = admissibility_constant(base.op, obs, p, base.horizon, 32, seed).gamma_hat;
    const double s = q / (q - p);
    rep.embedding_c =
        embedding_constant(EmbeddingParams::with_default_angle(s, q, theta), base.horizon);
    rep.kernel_norm = bergman_norm(base.kernel, {theta, q});
    const double t_factor = std::pow(base.horizon, (p - 1.0) / p);
    rep.beta_T = rep.gamma_T * t_factor * rep.embedding_c * rep.kernel_norm;
    rep.smallness = rep.beta_T < 1.0;

    if (p == 2.0 && rep.smallness) {
        const double kappa_a = 3.0 + 1.0 / base.op.eigenvalue(0);
        rep.assembled_bound =
            kappa_a * (1.0 + t_factor * rep.embedding_c * rep.kernel_norm * rep.gamma_T /
                                 (1.0 - rep.beta_T));
    } else {
        rep.assembled_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

}  // namespace volreg
