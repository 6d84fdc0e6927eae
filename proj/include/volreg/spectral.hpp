#pragma once

#include <span>
#include <vector>

namespace volreg {

enum class BoundaryKind { dirichlet, neumann };

/// Diagonal spectral model of a negative generator A on X = L^2(0,1):
/// A e_k = -lambda_k e_k with 0 < lambda_1 < lambda_2 < ... The basis is
/// sqrt(2) sin(k pi x) for Dirichlet and the cosine basis for Neumann, where
/// a positive shift keeps 0 in the resolvent set.
class SpectralOperator {
public:
    static SpectralOperator dirichlet(int mode_count);
    static SpectralOperator neumann(int mode_count, double shift = 1.0);

    BoundaryKind boundary() const { return boundary_; }
    int modes() const { return static_cast<int>(lambda_.size()); }
    double shift() const { return shift_; }
    /// k is zero-based: eigenvalue(0) == lambda_1.
    double eigenvalue(int k) const { return lambda_[static_cast<std::size_t>(k)]; }
    std::span<const double> eigenvalues() const { return lambda_; }
    /// Growth bound of the semigroup, omega_0(A) = -lambda_1.
    double growth_bound() const { return -lambda_.front(); }

private:
    SpectralOperator(BoundaryKind b, std::vector<double> lambda, double shift)
        : boundary_(b), lambda_(std::move(lambda)), shift_(shift) {}

    BoundaryKind boundary_;
    std::vector<double> lambda_;
    double shift_;
};

/// Coefficients of an X-valued state in the eigenbasis. Plain value type;
/// all operations on it are pure functions.
struct StateVector {
    std::vector<double> c;

    StateVector() = default;
    explicit StateVector(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    static StateVector zeros(int n);
    static StateVector basis(int n, int k);  // e_{k+1}, zero-based k

    int size() const { return static_cast<int>(c.size()); }
    double* data() { return c.data(); }
    const double* data() const { return c.data(); }
};

/// Parseval norm ||x||_X.
double norm(const StateVector& x);
double inner(const StateVector& x, const StateVector& y);
/// (||x||^2 + ||A x||^2)^(1/2).
double graph_norm(const SpectralOperator& op, const StateVector& x);
/// ||R(mu, A) x||, the extrapolation-space norm; mu must avoid the spectrum.
double extrapolation_norm(const SpectralOperator& op, const StateVector& x, double mu = 0.0);

StateVector add(const StateVector& x, const StateVector& y);
StateVector scaled(const StateVector& x, double c);

/// A x (componentwise -lambda_k x_k).
StateVector generator_apply(const SpectralOperator& op, const StateVector& x);

/// T(t) x = (e^{-lambda_k t} x_k). Requires t >= 0.
StateVector semigroup_apply(const SpectralOperator& op, double t, const StateVector& x);

/// R(lambda, A) x = (x_k / (lambda + lambda_k)). Rejects spectral points.
StateVector resolvent_apply(const SpectralOperator& op, double lambda, const StateVector& x);

/// (-A)^alpha x = (lambda_k^alpha x_k) for alpha in (0, 1].
StateVector fractional_power_apply(const SpectralOperator& op, double alpha,
                                   const StateVector& x);

}  // namespace volreg
