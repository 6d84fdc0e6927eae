#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace volreg {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    bool converged = true;
};

/// Adaptive Simpson on [a, b] to the given tolerance (relative where the
/// integral is not tiny, absolute floor abs_tol). Never throws on
/// non-convergence; the caller inspects `converged` / `error_estimate`.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-10, double abs_tol = 1e-300,
                            int max_depth = 48);

/// Same, but throws NumericalError (reporting the achieved tolerance) if the
/// requested accuracy was not reached.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, const char* what = "integral");

/// Composite Simpson over uniformly spaced samples (spacing dt). Handles an
/// odd number of intervals with a closing three-eighths rule. Requires at
/// least 3 samples.
double composite_simpson(std::span<const double> samples, double dt);

/// Cumulative integral of uniformly sampled vector-valued data: out[j] on
/// exit holds the componentwise integral over [0, j*dt]. Sample j of the
/// integrand is rows[j], all of length n. Parabolic (Simpson-grade) rule.
void cumulative_simpson(const std::vector<std::vector<double>>& rows, double dt,
                        std::vector<std::vector<double>>& out);

/// Least-squares slope of log(y) against log(x); used by convergence studies.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace volreg
