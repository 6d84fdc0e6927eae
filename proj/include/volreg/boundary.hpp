#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "volreg/memory_kernel.hpp"
#include "volreg/spectral.hpp"
#include "volreg/volterra.hpp"

namespace volreg {

/// Boundary data (value at x = 0, value at x = 1); U = R^2 with the
/// Euclidean norm.
using BoundaryPair = std::array<double, 2>;

/// Lifting map D_lambda: boundary data to the solution of
/// lambda u - u'' = 0 on (0,1) with that data; requires the Dirichlet basis
/// and lambda >= 0 away from the spectrum. Exposes both the exact function
/// and its truncated sine-coefficient expansion (closed-form integrals).
class DirichletMap {
public:
    DirichletMap(const SpectralOperator& op, double lambda);

    double lambda() const { return lambda_; }
    /// Exact lifted function at x in [0, 1].
    double closed_form(BoundaryPair u, double x) const;
    /// Boundary trace of the exact lifted function (equals u by construction).
    BoundaryPair trace(BoundaryPair u) const;
    /// Truncated coefficients <D_lambda u, sqrt(2) sin(k pi x)>.
    StateVector coefficients(BoundaryPair u) const;

private:
    const SpectralOperator* op_;
    double lambda_;
};

/// Coefficients of B u = (lambda - A_{-1}) D_lambda u in the eigenbasis,
/// computed through the lifting at the given resolvent point. The result is
/// independent of lambda (an extrapolation-space element; its X-norm grows
/// with the truncation level while its extrapolation norm stays finite).
StateVector control_coefficients(const SpectralOperator& op, double lambda, BoundaryPair u);

/// Smooth U-valued path with closed-form derivative.
struct BoundaryPath {
    std::function<BoundaryPair(double)> value;
    std::function<BoundaryPair(double)> deriv;
};

/// Seeded path of the form u(s) = s^2 (a cos(w s) + b sin(w s)) per channel,
/// which satisfies u(0) = u'(0) = 0 by construction.
BoundaryPath random_smooth_path(std::uint64_t seed);

/// Input map Phi_t u = D_0 u(t) - integral_0^t T(t-s) D_0 u'(s) ds via the
/// integration-by-parts form, composite Simpson with mode-resolved substeps.
/// Rejects paths with u(0) != 0 or u'(0) != 0.
StateVector input_map(const SpectralOperator& op, const BoundaryPath& u, double t);

/// Same map through the extrapolated convolution integral
/// integral_0^t T_{-1}(t-s) B u(s) ds, coefficientwise; used as the dual
/// formula for cross-checking.
StateVector input_map_convolution(const SpectralOperator& op, const BoundaryPath& u, double t);

/// Interval system with boundary feedback G z = K z, K bounded and given by
/// two Riesz representers: K z = (<z, k0>, <z, k1>).
struct BoundarySystem {
    SpectralOperator op;  // Dirichlet basis
    StateVector k0, k1;
    double alpha;  // fractional power of the memory coupling, (0, 1/2]
    MemoryKernel kernel;  // exponential family
    Forcing forcing;
    double horizon;
    double dt;

    int steps() const;
    void validate() const;
    /// Operator norm of K (largest singular value of the representer pair).
    double feedback_norm() const;
};

struct BoundarySolveResult {
    Trajectory traj;                 // z_j and memory trace w_j
    std::vector<StateVector> amz;    // A_m z_j = z'_j - w_j - f_j samples
    std::vector<double> norm_Amz;    // ||A_m z_j||
    std::vector<BoundaryPair> boundary_values;  // K z_j
    double spectral_abscissa = 0.0;  // max Re of the perturbed generator spectrum
    bool dissipative = true;         // abscissa < 0 at this truncation level
};

/// Steps z' = (A + B K) z + w + f, w' = beta (-A)^alpha z - gamma w with the
/// dense exact propagator of the coupled system and phi1-weighted midpoint
/// forcing; z(0) = w(0) = 0. A non-negative spectral abscissa is reported,
/// not fatal.
BoundarySolveResult solve_boundary(const BoundarySystem& sys);

struct FeedbackProbeReport {
    double obs_gamma = 0.0;      // admissibility constant of C = K
    double control_gain = 0.0;   // sup ||Phi_t u||_X / ||u||_{L^2([0,t],U)}
    double io_gain = 0.0;        // sup ||K Phi_. u||_{L^p} / ||u||_{L^p}
    int probes = 0;
};

/// Numeric probes for the boundedness/admissibility hypotheses of the
/// feedback triple (observation constant, input-map gain, io-map gain) on
/// seeded smooth paths. The remaining well-posedness hypotheses of the
/// closed loop (vanishing small-time average of the io map on step inputs,
/// and 1 lying in its resolvent set) are not decidable at a finite
/// truncation level and are carried as assumptions, not checks.
FeedbackProbeReport probe_feedback_triple(const SpectralOperator& op, const StateVector& k0,
                                          const StateVector& k1, double p, double t, int probes,
                                          std::uint64_t seed);

}  // namespace volreg
