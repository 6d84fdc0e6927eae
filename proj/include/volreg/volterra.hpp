#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "volreg/memory_kernel.hpp"
#include "volreg/spectral.hpp"

namespace volreg {

/// Smooth X-valued forcing path, evaluable at arbitrary times (the steppers
/// sample it at grid points and midpoints).
class Forcing {
public:
    using EvalFn = std::function<void(double, std::span<double>)>;

    Forcing() = default;
    explicit Forcing(EvalFn fn) : fn_(std::move(fn)) {}

    void eval(double t, std::span<double> out) const { fn_(t, out); }
    StateVector at(double t, int n) const;

private:
    EvalFn fn_;
};

Forcing zero_forcing();
Forcing constant_forcing(StateVector v);
/// Time-constant single eigenmode, zero-based index.
Forcing single_mode_forcing(int n, int mode_index, double amplitude = 1.0);
/// Seeded Gaussian trigonometric profiles on the lower half of the spectrum
/// (modes k <= n/2), smooth in time.
Forcing random_band_forcing(int n, std::uint64_t seed);

/// z'(t) = A z(t) + integral_0^t a(t-s) (-A)^alpha z(s) ds + f(t), z(0) = 0,
/// on a uniform grid t_j = j dt, j = 0..M with T = M dt.
struct VolterraProblem {
    SpectralOperator op;
    double alpha;  // fractional power in (0, 1/2]
    MemoryKernel kernel;
    Forcing forcing;
    double horizon;
    double dt;

    int steps() const;
    void validate() const;
};

/// Time-sampled solution record: z_j and the memory trace w_j = g(t_j, 0).
struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<StateVector> z;
    std::vector<StateVector> w;

    int steps() const { return static_cast<int>(times.size()) - 1; }
};

/// Augmented-state solver for the exponential family: the memory trace obeys
/// w' = beta (-A)^alpha z - gamma w, giving a per-mode 2x2 linear system that
/// is stepped with its exact propagator and a phi1-weighted midpoint forcing
/// term. Rejects kernels outside the exponential family.
Trajectory solve_augmented(const VolterraProblem& prob);

/// Convolution-quadrature solver for the whole kernel family: product
/// trapezoidal memory sums with an exact diagonal integrating factor for the
/// stiff part (exponential time differencing, predictor-corrector closure).
Trajectory solve_cq(const VolterraProblem& prob);

/// Equation-consistent derivative sample (A z + w + f)(t_j).
StateVector equation_zdot(const VolterraProblem& prob, const Trajectory& traj, int j);

/// Max over grid points of || z_j - integral_0^{t_j} (A z + w + f) ds ||_X,
/// the integral taken with an independent Simpson-grade cumulative rule.
double residual(const VolterraProblem& prob, const Trajectory& traj);

}  // namespace volreg
