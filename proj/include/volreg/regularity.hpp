#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "volreg/memory_kernel.hpp"
#include "volreg/spectral.hpp"
#include "volreg/volterra.hpp"

namespace volreg {

/// (integral_0^T ||x(t)||^p dt)^{1/p} by composite Simpson on ||x||^p over a
/// uniform grid. At least 3 samples are required.
double lp_time_norm(std::span<const double> sample_norms, double p, double dt);
double lp_time_norm(const std::vector<StateVector>& samples, double p, double dt);

/// Observation operator C mapping states to a finite-dimensional output.
struct Observation {
    std::string tag;
    int out_dim = 0;
    std::function<void(const StateVector&, std::span<double>)> apply;

    double output_norm(const StateVector& x) const;
};

/// C = (-A)^alpha_pow (diagonal; output dimension = mode count).
Observation frac_power_observation(const SpectralOperator& op, double alpha_pow);
/// C x = (<x, r_0>, ..., <x, r_{d-1}>) for Riesz representers r_i.
Observation bounded_observation(std::string tag, std::vector<StateVector> representers);
Observation zero_observation(int n);

struct AdmissibilityReport {
    double p = 2.0;
    double window = 0.0;
    std::string operator_tag;
    double gamma_hat = 0.0;  // sup over probes of (int_0^window ||C T(t)x||^p)^{1/p}, ||x|| = 1
    std::string attaining;   // probe that attains the sup
    int samples = 0;
};

/// Estimates the observation-admissibility constant on a probe set of all
/// basis vectors plus seeded random unit states. For p = 2 and diagonal C the
/// estimate is exact (the closed form is maximized on a basis vector).
AdmissibilityReport admissibility_constant(const SpectralOperator& op, const Observation& obs,
                                           double p, double window, int random_probes = 32,
                                           std::uint64_t seed = 1);

struct PerturbationBoundReport {
    double p = 2.0;
    double window = 0.0;
    double gamma_hat = 0.0;
    double kernel_norm = 0.0;  // Bergman norm of the memory kernel
    double max_ratio = 0.0;    // max over probes of lhs / rhs
    int violations = 0;        // probes with lhs > rhs (beyond rounding slack)
    int samples = 0;
};

/// Probes the split-perturbation output-energy bound
///   int_0^w (||f(t)|| + ||a||_B ||F T(t) x||)^p dt
///     <= 2^{p-1} ( ||a||_B^p gamma^p ||x||^p + int_0^w ||f(t)||^p dt )
/// over seeded (x, f) pairs, f = scalar-kernel profile times a fixed
/// direction. Both sides are evaluated by quadrature.
PerturbationBoundReport check_perturbation_bound(const MemoryKernel& a,
                                                 const SpectralOperator& op, double alpha_pow,
                                                 double p, double q, double theta, double window,
                                                 int pairs, std::uint64_t seed);

struct TraceBoundResult {
    double lhs = 0.0;        // || w ||_{L^p}
    double rhs = 0.0;        // T^{(p-1)/p} C_T ||a||_{B^q_theta} || (-A)^alpha z ||_{L^p}
    double embedding_c = 0.0;
    double kernel_norm = 0.0;
};

/// Both sides of the memory-trace estimate for a solved trajectory. The
/// embedding constant is taken at exponent pair s = q/(q-p) (so the halfline
/// exponent equals p); this requires q > 2p.
TraceBoundResult memory_trace_bound(const VolterraProblem& prob, const Trajectory& traj,
                                    double p, double q, double theta);

struct RegularityReport {
    double p = 2.0;
    double T = 0.0;
    int ensemble = 0;
    std::uint64_t seed = 0;
    std::vector<double> norm_zdot, norm_Az, norm_z, norm_f, ratio;
    double ratio_max = 0.0;
    double ratio_mean = 0.0;
    // Smallness chain beta_T = gamma_T T^{(p-1)/p} C_T ||a||_{B^q_theta}.
    double gamma_T = 0.0;
    double embedding_c = 0.0;
    double kernel_norm = 0.0;
    double beta_T = 0.0;
    bool smallness = false;  // beta_T < 1
    /// Deterministic bound on the ratio assembled from the chain (p = 2 only,
    /// NaN otherwise): kappa_A (1 + T^{(p-1)/p} C_T ||a|| gamma_T/(1-beta_T))
    /// with kappa_A = 3 + 1/lambda_1 from the Fourier-multiplier estimate.
    double assembled_bound = 0.0;
};

/// Solves the problem for an ensemble of seeded band-limited forcings and
/// reports the empirical regularity ratios (||z'|| + ||A z|| + ||z||)/||f||
/// together with the smallness factor beta_T and its inputs. Ensemble
/// members run in parallel; p must lie in (1, 2] (the admissibility exponent
/// of the fractional-power observation).
RegularityReport verify_max_regularity(const VolterraProblem& base, double p, int ensemble,
                                       std::uint64_t seed, double q = 6.0,
                                       double theta = 0.78539816339744831);

}  // namespace volreg
