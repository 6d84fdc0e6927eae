// volreg: spectral solvers and verification harness for Volterra
// integro-differential evolution equations with memory kernels.
//
// Subcommands: solve, boundary, bergman, lemma4, exponents, admissibility,
// maxreg, trace-bound. Exit codes: 0 success, 2 validation error,
// 3 numerical failure.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "volreg/bergman.hpp"
#include "volreg/boundary.hpp"
#include "volreg/config.hpp"
#include "volreg/errors.hpp"
#include "volreg/quadrature.hpp"
#include "volreg/regularity.hpp"
#include "volreg/simd.hpp"
#include "volreg/spectral.hpp"
#include "volreg/volterra.hpp"

namespace {

using namespace volreg;

constexpr double kPi4 = std::numbers::pi / 4.0;

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string out;
    double tol = 1e-9;  // one-sided slack for inequality verdicts
};

std::uint64_t require_seed(const GlobalOptions& g, const char* scenario) {
    if (!g.seed) {
        throw ValidationError(std::string(scenario) + ": --seed is required for seeded scenarios");
    }
    return *g.seed;
}

/// Applies key=value config entries to CLI options that were not set on the
/// command line (flags win); unknown keys are rejected.
class ConfigBinder {
public:
    void bind(const std::string& key, CLI::Option* opt) { entries_[key] = opt; }

    void apply_file(const std::string& path) const {
        std::ifstream f(path);
        if (!f) throw ValidationError("config: cannot open '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        const ExperimentConfig cfg = ExperimentConfig::parse(ss.str());
        for (const auto& [key, value] : cfg.values) {
            auto it = entries_.find(key);
            if (it == entries_.end()) throw ValidationError("config: unknown key '" + key + "'");
            if (it->second->count() > 0) continue;  // command line wins
            it->second->add_result(value);
            it->second->run_callback();
        }
    }

private:
    std::map<std::string, CLI::Option*> entries_;
};

void write_outputs(const GlobalOptions& g, const CsvWriter& csv, const ExperimentConfig& meta) {
    if (g.out.empty()) {
        std::fputs(csv.str().c_str(), stdout);
        return;
    }
    csv.write_file(g.out);
    std::ofstream meta_file(g.out + ".meta", std::ios::binary | std::ios::trunc);
    if (!meta_file) throw ValidationError("cannot open sidecar '" + g.out + ".meta'");
    meta_file << meta.render();
}

ExperimentConfig base_meta(const GlobalOptions& g, const std::string& scenario,
                           const std::string& checks) {
    ExperimentConfig meta;
    meta.set("scenario", scenario);
    meta.set("checks", checks);
    meta.set("simd", std::string(simd::isa_name(simd::active_isa())));
    if (g.seed) meta.set("seed", std::to_string(*g.seed));
    return meta;
}

std::string fmt(double v) { return CsvWriter::format(v); }

// ---------------------------------------------------------------- bergman --

void run_bergman(const GlobalOptions& g, const std::vector<std::string>& kernel_specs, double q,
                 double theta) {
    CsvWriter csv({"kernel", "q", "theta", "norm", "quad_error_estimate"});
    ExperimentConfig meta = base_meta(g, "bergman", "sector area-norm quadrature with certified tail");
    meta.set("q", fmt(q));
    meta.set("theta", fmt(theta));
    for (const auto& spec : kernel_specs) {
        const MemoryKernel k = MemoryKernel::parse(spec);
        try {
            const BergmanNorm bn = bergman_norm_detailed(k, {theta, q});
            csv.append_row({spec, fmt(q), fmt(theta), fmt(bn.value), fmt(bn.error_estimate)});
        } catch (const NumericalError& e) {
            // flush what was computed before reporting the failure
            meta.set("error", e.what());
            write_outputs(g, csv, meta);
            throw;
        }
    }
    write_outputs(g, csv, meta);
}

// ----------------------------------------------------------------- lemma4 --

void run_lemma4(const GlobalOptions& g, const std::vector<std::string>& kernel_specs,
                const std::vector<double>& radii, double q, double s, double theta,
                bool optimize_alpha) {
    CsvWriter csv({"q", "s", "theta", "alpha", "R", "C_R", "lhs", "rhs", "satisfied"});
    const EmbeddingParams base = EmbeddingParams::with_default_angle(s, q, theta);
    const double p = base.p();
    int unsatisfied = 0;
    for (const auto& spec : kernel_specs) {
        const MemoryKernel k = MemoryKernel::parse(spec);
        const double knorm = bergman_norm(k, {theta, q});
        for (double radius : radii) {
            double c_r = 0.0;
            double alpha_used = base.alpha;
            if (optimize_alpha) {
                const EmbeddingConstant ec = embedding_constant_optimized(base, radius);
                c_r = ec.value;
                alpha_used = ec.alpha_used;
            } else {
                c_r = embedding_constant(base, radius);
            }
            auto integrand = [&](double t) {
                return std::pow(std::abs(k.eval_real(t)), p);
            };
            const double lhs =
                std::pow(integrate_or_throw(integrand, 0.0, radius, 1e-11, "embedding lhs"),
                         1.0 / p);
            const double rhs = c_r * knorm;
            const bool sat = lhs <= rhs * (1.0 + g.tol);
            if (!sat) ++unsatisfied;
            csv.append_row({fmt(q), fmt(s), fmt(theta), fmt(alpha_used), fmt(radius), fmt(c_r),
                            fmt(lhs), fmt(rhs), sat ? "1" : "0"});
        }
    }
    ExperimentConfig meta = base_meta(g, "lemma4", "halfline-vs-sector embedding constant grid");
    meta.set("q", fmt(q));
    meta.set("s", fmt(s));
    meta.set("theta", fmt(theta));
    meta.set("unsatisfied", std::to_string(unsatisfied));
    write_outputs(g, csv, meta);
    if (unsatisfied > 0) {
        throw NumericalError("lemma4: " + std::to_string(unsatisfied) + " grid cases unsatisfied");
    }
}

// -------------------------------------------------------------- exponents --

void run_exponents(const GlobalOptions& g, std::optional<double> q_opt,
                   std::optional<double> l_opt, int samples) {
    CsvWriter csv({"q", "l", "s", "p"});
    if (q_opt && l_opt) {
        const ExponentChoice ch = choose_exponents(*q_opt, *l_opt);
        csv.append_row({fmt(*q_opt), fmt(*l_opt), fmt(ch.s), fmt(ch.p)});
    } else {
        const std::uint64_t seed = require_seed(g, "exponents");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(1.0 + 1e-9, 20.0);
        for (int i = 0; i < samples; ++i) {
            const double q = unif(rng);
            const double l = unif(rng);
            const ExponentChoice ch = choose_exponents(q, l);
            csv.append_row({fmt(q), fmt(l), fmt(ch.s), fmt(ch.p)});
        }
    }
    write_outputs(g, csv, base_meta(g, "exponents", "exponent selector admissible range"));
}

// ---------------------------------------------------------- admissibility --

void run_admissibility(const GlobalOptions& g, int modes, double p, double alpha_pow,
                       const std::vector<double>& windows, int probes) {
    const SpectralOperator op = SpectralOperator::dirichlet(modes);
    const Observation obs = frac_power_observation(op, alpha_pow);
    const std::uint64_t seed = g.seed.value_or(1);
    CsvWriter csv({"p", "window", "operator", "gamma_hat", "attaining", "samples"});
    for (double window : windows) {
        const AdmissibilityReport rep = admissibility_constant(op, obs, p, window, probes, seed);
        csv.append_row({fmt(rep.p), fmt(rep.window), rep.operator_tag, fmt(rep.gamma_hat),
                        rep.attaining, std::to_string(rep.samples)});
    }
    ExperimentConfig meta = base_meta(g, "admissibility", "observation output-energy window sweep");
    meta.set("modes", std::to_string(modes));
    meta.set("alpha_pow", fmt(alpha_pow));
    write_outputs(g, csv, meta);
}

// ------------------------------------------------------------------ solve --

Forcing make_forcing(const std::string& kind, int modes, int mode_index, std::uint64_t seed) {
    if (kind == "const") {
        StateVector v = StateVector::zeros(modes);
        const int band = std::min(modes, 8);
        double nrm2 = 0.0;
        for (int k = 0; k < band; ++k) {
            v.c[static_cast<std::size_t>(k)] = 1.0 / (k + 1);
            nrm2 += v.c[static_cast<std::size_t>(k)] * v.c[static_cast<std::size_t>(k)];
        }
        for (auto& c : v.c) c /= std::sqrt(nrm2);
        return constant_forcing(std::move(v));
    }
    if (kind == "single-mode") return single_mode_forcing(modes, mode_index);
    if (kind == "random-seeded") return random_band_forcing(modes, seed);
    throw ValidationError("forcing: unknown kind '" + kind + "'");
}

void run_solve(const GlobalOptions& g, int modes, double alpha, const std::string& kernel_spec,
               const std::string& forcing_kind, int mode_index, double horizon, double dt,
               const std::string& solver) {
    const SpectralOperator op = SpectralOperator::dirichlet(modes);
    const MemoryKernel kernel = MemoryKernel::parse(kernel_spec);
    std::uint64_t seed = 0;
    if (forcing_kind == "random-seeded") seed = require_seed(g, "solve");
    VolterraProblem prob{op, alpha, kernel, make_forcing(forcing_kind, modes, mode_index, seed),
                         horizon, dt};
    prob.validate();

    Trajectory traj;
    double cross_discrepancy = std::numeric_limits<double>::quiet_NaN();
    if (solver == "aug") {
        traj = solve_augmented(prob);
    } else if (solver == "cq") {
        traj = solve_cq(prob);
    } else if (solver == "both") {
        traj = solve_augmented(prob);
        const Trajectory other = solve_cq(prob);
        cross_discrepancy = 0.0;
        for (std::size_t j = 0; j < traj.z.size(); ++j) {
            StateVector d = add(traj.z[j], scaled(other.z[j], -1.0));
            cross_discrepancy = std::max(cross_discrepancy, norm(d));
        }
    } else {
        throw ValidationError("solve: --solver must be aug, cq, or both");
    }

    // Running integrated-equation defect per grid point.
    const int m = traj.steps();
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) rows[static_cast<std::size_t>(j)] = equation_zdot(prob, traj, j).c;
    std::vector<std::vector<double>> cum;
    cumulative_simpson(rows, traj.dt, cum);

    CsvWriter csv({"t", "norm_z", "norm_Az", "norm_w", "residual"});
    for (int j = 0; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        double defect2 = 0.0;
        for (std::size_t k = 0; k < cum[ju].size(); ++k) {
            const double d = traj.z[ju].c[k] - cum[ju][k];
            defect2 += d * d;
        }
        csv.append_row({fmt(traj.times[ju]), fmt(norm(traj.z[ju])),
                        fmt(norm(generator_apply(op, traj.z[ju]))), fmt(norm(traj.w[ju])),
                        fmt(std::sqrt(defect2))});
    }
    ExperimentConfig meta =
        base_meta(g, "solve", "interior Volterra evolution; integrated-equation residual");
    meta.set("modes", std::to_string(modes));
    meta.set("alpha", fmt(alpha));
    meta.set("kernel", kernel_spec);
    meta.set("forcing", forcing_kind);
    meta.set("solver", solver);
    meta.set("T", fmt(horizon));
    meta.set("dt", fmt(dt));
    if (solver == "both") meta.set("cross_solver_max_discrepancy", fmt(cross_discrepancy));
    write_outputs(g, csv, meta);
    if (solver == "both") {
        std::fprintf(stderr, "cross-solver max discrepancy: %.6g\n", cross_discrepancy);
    }
}

// ----------------------------------------------------------------- maxreg --

void run_maxreg(const GlobalOptions& g, int modes, double p, double alpha,
                const std::string& kernel_spec, double horizon, double dt, int ensemble, double q,
                double theta) {
    const std::uint64_t seed = require_seed(g, "maxreg");
    const SpectralOperator op = SpectralOperator::dirichlet(modes);
    VolterraProblem base{op, alpha, MemoryKernel::parse(kernel_spec), zero_forcing(), horizon, dt};
    const RegularityReport rep = verify_max_regularity(base, p, ensemble, seed, q, theta);

    CsvWriter csv({"sample", "p", "T", "norm_zdot", "norm_Az", "norm_z", "norm_f", "ratio",
                   "beta_T", "gamma_T", "C_T", "kernel_bergman_norm", "ratio_max", "ratio_mean"});
    for (int i = 0; i < rep.ensemble; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        csv.append_row({std::to_string(i), fmt(rep.p), fmt(rep.T), fmt(rep.norm_zdot[iu]),
                        fmt(rep.norm_Az[iu]), fmt(rep.norm_z[iu]), fmt(rep.norm_f[iu]),
                        fmt(rep.ratio[iu]), fmt(rep.beta_T), fmt(rep.gamma_T),
                        fmt(rep.embedding_c), fmt(rep.kernel_norm), fmt(rep.ratio_max),
                        fmt(rep.ratio_mean)});
    }
    ExperimentConfig meta =
        base_meta(g, "maxreg", "regularity ratio ensemble and smallness factor");
    meta.set("modes", std::to_string(modes));
    meta.set("kernel", kernel_spec);
    meta.set("beta_T", fmt(rep.beta_T));
    meta.set("smallness", rep.smallness ? "1" : "0");
    meta.set("assembled_bound", fmt(rep.assembled_bound));
    write_outputs(g, csv, meta);
    std::fprintf(stderr, "ratio max %.6g mean %.6g beta_T %.6g (smallness %s)\n", rep.ratio_max,
                 rep.ratio_mean, rep.beta_T, rep.smallness ? "yes" : "no");
}

// ------------------------------------------------------------ trace-bound --

void run_trace_bound(const GlobalOptions& g, int modes, double p, double q, double theta,
                     double alpha, const std::string& kernel_spec, double horizon, double dt,
                     int samples) {
    const std::uint64_t seed = require_seed(g, "trace-bound");
    const SpectralOperator op = SpectralOperator::dirichlet(modes);
    const MemoryKernel kernel = MemoryKernel::parse(kernel_spec);
    CsvWriter csv({"sample", "p", "q", "theta", "T", "lhs", "rhs", "satisfied"});
    int unsatisfied = 0;
    for (int i = 0; i < samples; ++i) {
        VolterraProblem prob{op, alpha, kernel,
                             random_band_forcing(modes, seed + static_cast<std::uint64_t>(i)),
                             horizon, dt};
        const Trajectory traj = kernel.monomial_degree() == 0 ? solve_augmented(prob)
                                                              : solve_cq(prob);
        const TraceBoundResult tb = memory_trace_bound(prob, traj, p, q, theta);
        const bool sat = tb.lhs <= tb.rhs * (1.0 + g.tol);
        if (!sat) ++unsatisfied;
        csv.append_row({std::to_string(i), fmt(p), fmt(q), fmt(theta), fmt(horizon), fmt(tb.lhs),
                        fmt(tb.rhs), sat ? "1" : "0"});
    }
    ExperimentConfig meta = base_meta(g, "trace-bound", "memory trace estimate, both sides");
    meta.set("modes", std::to_string(modes));
    meta.set("kernel", kernel_spec);
    meta.set("unsatisfied", std::to_string(unsatisfied));
    write_outputs(g, csv, meta);
    if (unsatisfied > 0) {
        throw NumericalError("trace-bound: " + std::to_string(unsatisfied) + " samples unsatisfied");
    }
}

// --------------------------------------------------------------- boundary --

void run_boundary(const GlobalOptions& g, int modes, double alpha, const std::string& kernel_spec,
                  double knorm, double horizon, double dt) {
    const std::uint64_t seed = require_seed(g, "boundary");
    const SpectralOperator op = SpectralOperator::dirichlet(modes);
    StateVector k0 = StateVector::zeros(modes);
    StateVector k1 = StateVector::zeros(modes);
    if (knorm != 0.0) {
        k0 = scaled(StateVector::basis(modes, 0), knorm);
        k1 = scaled(StateVector::basis(modes, std::min(1, modes - 1)), knorm);
    }
    BoundarySystem sys{op,    k0, k1, alpha, MemoryKernel::parse(kernel_spec),
                       random_band_forcing(modes, seed), horizon, dt};
    const BoundarySolveResult res = solve_boundary(sys);

    CsvWriter csv({"t", "norm_z", "norm_Amz", "boundary_value_0", "boundary_value_1"});
    const int m = res.traj.steps();
    for (int j = 0; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        csv.append_row({fmt(res.traj.times[ju]), fmt(norm(res.traj.z[ju])), fmt(res.norm_Amz[ju]),
                        fmt(res.boundary_values[ju][0]), fmt(res.boundary_values[ju][1])});
    }
    ExperimentConfig meta =
        base_meta(g, "boundary", "boundary feedback evolution with lifted control");
    meta.set("modes", std::to_string(modes));
    meta.set("alpha", fmt(alpha));
    meta.set("kernel", kernel_spec);
    meta.set("knorm", fmt(knorm));
    meta.set("spectral_abscissa", fmt(res.spectral_abscissa));
    meta.set("dissipative", res.dissipative ? "1" : "0");
    write_outputs(g, csv, meta);
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* isa = std::getenv("VOLREG_SIMD")) {
        try {
            if (std::string_view(isa) == "scalar") {
                simd::force_isa(simd::Isa::scalar);
            } else if (std::string_view(isa) == "avx2") {
                simd::force_isa(simd::Isa::avx2);
            } else if (std::string_view(isa) != "auto") {
                std::fprintf(stderr, "VOLREG_SIMD: unknown value '%s' (scalar|avx2|auto)\n", isa);
                return 2;
            }
        } catch (const ValidationError& e) {
            std::fprintf(stderr, "VOLREG_SIMD: %s\n", e.what());
            return 2;
        }
    }

    CLI::App app{"spectral Volterra evolution solvers and regularity verification"};
    app.require_subcommand(1);

    GlobalOptions g;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed for seeded scenarios");
    app.add_option("--out", g.out, "CSV output path (stdout if omitted); sidecar <out>.meta");
    app.add_option("--tol", g.tol, "one-sided slack for inequality verdicts");

    // bergman
    auto* c_bergman = app.add_subcommand("bergman", "sector norms of memory kernels");
    std::vector<std::string> b_kernels{"exp:1,1"};
    double b_q = 2.0, b_theta = kPi4;
    ConfigBinder b_binder;
    std::string b_config;
    b_binder.bind("kernel", c_bergman->add_option("--kernel", b_kernels, "kernel specs"));
    b_binder.bind("q", c_bergman->add_option("--q", b_q, "integrability exponent"));
    b_binder.bind("theta", c_bergman->add_option("--theta", b_theta, "sector half-angle"));
    c_bergman->add_option("--config", b_config, "key=value config file (flags win)");

    // lemma4
    auto* c_lemma4 = app.add_subcommand("lemma4", "halfline-vs-sector embedding grid");
    std::vector<std::string> l_kernels{"exp:1,1", "exp:2,3", "mexp:1,1,1"};
    std::vector<double> l_radii{0.1, 1.0, 10.0};
    double l_q = 4.0, l_s = 1.5, l_theta = kPi4;
    bool l_optimize = false;
    ConfigBinder l_binder;
    std::string l_config;
    l_binder.bind("kernel", c_lemma4->add_option("--kernel", l_kernels, "kernel specs"));
    l_binder.bind("R", c_lemma4->add_option("--R", l_radii, "halfline radii"));
    l_binder.bind("q", c_lemma4->add_option("--q", l_q, "sector exponent (> 2)"));
    l_binder.bind("s", c_lemma4->add_option("--s", l_s, "Hoelder exponent in (1,2)"));
    l_binder.bind("theta", c_lemma4->add_option("--theta", l_theta, "sector half-angle"));
    l_binder.bind("optimize-alpha",
                  c_lemma4->add_flag("--optimize-alpha", l_optimize, "minimize over contour angles"));
    c_lemma4->add_option("--config", l_config, "key=value config file (flags win)");

    // exponents
    auto* c_exp = app.add_subcommand("exponents", "exponent pair selector");
    double e_q = 0.0, e_l = 0.0;
    int e_samples = 100;
    auto* e_qopt = c_exp->add_option("--q", e_q, "sector exponent");
    auto* e_lopt = c_exp->add_option("--l", e_l, "admissibility exponent");
    c_exp->add_option("--samples", e_samples, "random pairs when --q/--l omitted");

    // admissibility
    auto* c_adm = app.add_subcommand("admissibility", "observation admissibility constants");
    int a_modes = 32, a_probes = 32;
    double a_p = 2.0, a_alpha_pow = 0.5;
    std::vector<double> a_windows{0.1, 1.0, 10.0};
    c_adm->add_option("--modes", a_modes, "truncation level");
    c_adm->add_option("--p", a_p, "exponent");
    c_adm->add_option("--alpha-pow", a_alpha_pow, "fractional power of the observation");
    c_adm->add_option("--window", a_windows, "observation windows");
    c_adm->add_option("--probes", a_probes, "random probe count");

    // solve
    auto* c_solve = app.add_subcommand("solve", "interior Volterra evolution");
    int s_modes = 64, s_mode_index = 0;
    double s_alpha = 0.5, s_T = 1.0, s_dt = 1e-3;
    std::string s_kernel = "exp:1,1", s_forcing = "const", s_solver = "aug", s_config;
    ConfigBinder s_binder;
    s_binder.bind("modes", c_solve->add_option("--modes", s_modes, "truncation level"));
    s_binder.bind("alpha", c_solve->add_option("--alpha", s_alpha, "fractional power in (0,1/2]"));
    s_binder.bind("kernel", c_solve->add_option("--kernel", s_kernel, "kernel spec"));
    s_binder.bind("forcing", c_solve->add_option("--forcing", s_forcing,
                                                 "const | random-seeded | single-mode"));
    s_binder.bind("mode-index",
                  c_solve->add_option("--mode-index", s_mode_index, "mode for single-mode forcing"));
    s_binder.bind("T", c_solve->add_option("--T", s_T, "horizon"));
    s_binder.bind("dt", c_solve->add_option("--dt", s_dt, "step"));
    s_binder.bind("solver", c_solve->add_option("--solver", s_solver, "aug | cq | both"));
    c_solve->add_option("--config", s_config, "key=value config file (flags win)");

    // maxreg
    auto* c_maxreg = app.add_subcommand("maxreg", "regularity ratio ensemble");
    int m_modes = 32, m_ensemble = 100;
    double m_p = 2.0, m_alpha = 0.5, m_T = 0.1, m_dt = 5e-4, m_q = 6.0, m_theta = kPi4;
    std::string m_kernel = "exp:1,1";
    c_maxreg->add_option("--modes", m_modes, "truncation level");
    c_maxreg->add_option("--p", m_p, "time exponent in (1,2]");
    c_maxreg->add_option("--alpha", m_alpha, "fractional power");
    c_maxreg->add_option("--kernel", m_kernel, "kernel spec");
    c_maxreg->add_option("--T", m_T, "horizon");
    c_maxreg->add_option("--dt", m_dt, "step");
    c_maxreg->add_option("--ensemble", m_ensemble, "sample count");
    c_maxreg->add_option("--q", m_q, "sector exponent for the smallness chain (> 2p)");
    c_maxreg->add_option("--theta", m_theta, "sector half-angle");

    // trace-bound
    auto* c_trace = app.add_subcommand("trace-bound", "memory trace estimate");
    int t_modes = 16, t_samples = 20;
    double t_p = 2.0, t_q = 6.0, t_theta = kPi4, t_alpha = 0.5, t_T = 1.0, t_dt = 1e-3;
    std::string t_kernel = "exp:1,1";
    c_trace->add_option("--modes", t_modes, "truncation level");
    c_trace->add_option("--p", t_p, "time exponent");
    c_trace->add_option("--q", t_q, "sector exponent (> 2p)");
    c_trace->add_option("--theta", t_theta, "sector half-angle");
    c_trace->add_option("--alpha", t_alpha, "fractional power");
    c_trace->add_option("--kernel", t_kernel, "kernel spec");
    c_trace->add_option("--T", t_T, "horizon");
    c_trace->add_option("--dt", t_dt, "step");
    c_trace->add_option("--samples", t_samples, "forcing samples");

    // boundary
    auto* c_boundary = app.add_subcommand("boundary", "boundary feedback evolution");
    int bd_modes = 32;
    double bd_alpha = 0.5, bd_knorm = 0.1, bd_T = 0.5, bd_dt = 5e-4;
    std::string bd_kernel = "exp:1,1";
    c_boundary->add_option("--modes", bd_modes, "truncation level");
    c_boundary->add_option("--alpha", bd_alpha, "fractional power");
    c_boundary->add_option("--kernel", bd_kernel, "kernel spec (exponential family)");
    c_boundary->add_option("--knorm", bd_knorm, "operator norm of the feedback K");
    c_boundary->add_option("--T", bd_T, "horizon");
    c_boundary->add_option("--dt", bd_dt, "step");

    // let --seed/--out/--tol appear after the subcommand as well
    for (CLI::App* sc : {c_bergman, c_lemma4, c_exp, c_adm, c_solve, c_maxreg, c_trace,
                         c_boundary}) {
        sc->fallthrough();
    }

    try {
        app.parse(argc, argv);
        if (seed_opt->count() > 0) g.seed = seed_value;

        if (*c_bergman) {
            if (!b_config.empty()) b_binder.apply_file(b_config);
            run_bergman(g, b_kernels, b_q, b_theta);
        } else if (*c_lemma4) {
            if (!l_config.empty()) l_binder.apply_file(l_config);
            run_lemma4(g, l_kernels, l_radii, l_q, l_s, l_theta, l_optimize);
        } else if (*c_exp) {
            run_exponents(g, e_qopt->count() ? std::optional<double>(e_q) : std::nullopt,
                          e_lopt->count() ? std::optional<double>(e_l) : std::nullopt, e_samples);
        } else if (*c_adm) {
            run_admissibility(g, a_modes, a_p, a_alpha_pow, a_windows, a_probes);
        } else if (*c_solve) {
            if (!s_config.empty()) s_binder.apply_file(s_config);
            run_solve(g, s_modes, s_alpha, s_kernel, s_forcing, s_mode_index, s_T, s_dt, s_solver);
        } else if (*c_maxreg) {
            run_maxreg(g, m_modes, m_p, m_alpha, m_kernel, m_T, m_dt, m_ensemble, m_q, m_theta);
        } else if (*c_trace) {
            run_trace_bound(g, t_modes, t_p, t_q, t_theta, t_alpha, t_kernel, t_T, t_dt, t_samples);
        } else if (*c_boundary) {
            run_boundary(g, bd_modes, bd_alpha, bd_kernel, bd_knorm, bd_T, bd_dt);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
