#include "volreg/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "volreg/errors.hpp"
#include "volreg/simd.hpp"

namespace volreg {

namespace {

void require_same_size(const SpectralOperator& op, const StateVector& x, const char* where) {
    if (op.modes() != x.size()) {
        throw ValidationError(std::string(where) + ": state size " + std::to_string(x.size()) +
                              " does not match mode count " + std::to_string(op.modes()));
    }
}

}  // namespace

SpectralOperator SpectralOperator::dirichlet(int mode_count) {
    if (mode_count <= 0) throw ValidationError("SpectralOperator: mode_count must be positive");
    std::vector<double> lambda(static_cast<std::size_t>(mode_count));
    for (int k = 1; k <= mode_count; ++k) {
        const double kpi = k * std::numbers::pi;
        lambda[static_cast<std::size_t>(k - 1)] = kpi * kpi;
    }
    return SpectralOperator(BoundaryKind::dirichlet, std::move(lambda), 0.0);
}

SpectralOperator SpectralOperator::neumann(int mode_count, double shift) {
    if (mode_count <= 0) throw ValidationError("SpectralOperator: mode_count must be positive");
    if (!(shift > 0.0)) {
        throw ValidationError("SpectralOperator: neumann shift must be positive so 0 is in the resolvent set");
    }
    std::vector<double> lambda(static_cast<std::size_t>(mode_count));
    for (int k = 1; k <= mode_count; ++k) {
        const double kpi = (k - 1) * std::numbers::pi;
        lambda[static_cast<std::size_t>(k - 1)] = kpi * kpi + shift;
    }
    return SpectralOperator(BoundaryKind::neumann, std::move(lambda), shift);
}

StateVector StateVector::zeros(int n) {
    return StateVector(std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

StateVector StateVector::basis(int n, int k) {
    if (k < 0 || k >= n) throw ValidationError("StateVector::basis: index out of range");
    StateVector x = zeros(n);
    x.c[static_cast<std::size_t>(k)] = 1.0;
    return x;
}

double norm(const StateVector& x) {
    return std::sqrt(simd::dot(x.data(), x.data(), x.c.size()));
}

double inner(const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) throw ValidationError("inner: size mismatch");
    return simd::dot(x.data(), y.data(), x.c.size());
}

double graph_norm(const SpectralOperator& op, const StateVector& x) {
    require_same_size(op, x, "graph_norm");
    const auto& lam = op.eigenvalues();
    double s = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        const double xk = x.c[static_cast<std::size_t>(k)];
        s += xk * xk * (1.0 + lam[static_cast<std::size_t>(k)] * lam[static_cast<std::size_t>(k)]);
    }
    return std::sqrt(s);
}

double extrapolation_norm(const SpectralOperator& op, const StateVector& x, double mu) {
    require_same_size(op, x, "extrapolation_norm");
    std::vector<double> w(x.c.size());
    for (int k = 0; k < x.size(); ++k) {
        const double d = mu + op.eigenvalue(k);
        if (d == 0.0) throw ValidationError("extrapolation_norm: mu hits the spectrum");
        w[static_cast<std::size_t>(k)] = 1.0 / (d * d);
    }
    return std::sqrt(simd::weighted_sumsq(w.data(), x.data(), x.c.size()));
}

StateVector add(const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) throw ValidationError("add: size mismatch");
    StateVector r = x;
    simd::axpy(r.data(), 1.0, y.data(), r.c.size());
    return r;
}

StateVector scaled(const StateVector& x, double c) {
    StateVector r = StateVector::zeros(x.size());
    simd::axpy(r.data(), c, x.data(), r.c.size());
    return r;
}

StateVector generator_apply(const SpectralOperator& op, const StateVector& x) {
    require_same_size(op, x, "generator_apply");
    StateVector r = StateVector::zeros(x.size());
    std::vector<double> neg(x.c.size());
    for (int k = 0; k < x.size(); ++k) neg[static_cast<std::size_t>(k)] = -op.eigenvalue(k);
    simd::vmul(r.data(), neg.data(), x.data(), x.c.size());
    return r;
}

StateVector semigroup_apply(const SpectralOperator& op, double t, const StateVector& x) {
    require_same_size(op, x, "semigroup_apply");
    if (!(t >= 0.0)) throw ValidationError("semigroup_apply: time must be nonnegative");
    std::vector<double> factors(x.c.size());
    for (int k = 0; k < x.size(); ++k) {
        factors[static_cast<std::size_t>(k)] = std::exp(-op.eigenvalue(k) * t);
    }
    StateVector r = StateVector::zeros(x.size());
    simd::vmul(r.data(), factors.data(), x.data(), x.c.size());
    return r;
}

StateVector resolvent_apply(const SpectralOperator& op, double lambda, const StateVector& x) {
    require_same_size(op, x, "resolvent_apply");
    std::vector<double> factors(x.c.size());
    for (int k = 0; k < x.size(); ++k) {
        const double d = lambda + op.eigenvalue(k);
        if (d == 0.0) {
            throw ValidationError("resolvent_apply: lambda = " + std::to_string(lambda) +
                                  " is a spectral point of A");
        }
        factors[static_cast<std::size_t>(k)] = 1.0 / d;
    }
    StateVector r = StateVector::zeros(x.size());
    simd::vmul(r.data(), factors.data(), x.data(), x.c.size());
    return r;
}

StateVector fractional_power_apply(const SpectralOperator& op, double alpha,
                                   const StateVector& x) {
    require_same_size(op, x, "fractional_power_apply");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ValidationError("fractional_power_apply: alpha must lie in (0, 1]");
    }
    std::vector<double> factors(x.c.size());
    for (int k = 0; k < x.size(); ++k) {
        factors[static_cast<std::size_t>(k)] = std::pow(op.eigenvalue(k), alpha);
    }
    StateVector r = StateVector::zeros(x.size());
    simd::vmul(r.data(), factors.data(), x.data(), x.c.size());
    return r;
}

}  // namespace volreg
