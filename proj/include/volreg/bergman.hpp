#pragma once

#include "volreg/memory_kernel.hpp"

namespace volreg {

/// Sector of half-angle theta with integrability exponent q for the
/// area-integral norm on holomorphic functions.
struct SectorSpec {
    double theta;  // (0, pi/2]
    double q;      // > 1
};

struct BergmanNorm {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute, on the norm (tail bound included)
};

/// ( integral over the sector of |f(tau + i sigma)|^q d tau d sigma )^{1/q}
/// by tensorized adaptive quadrature with a certified exponential tail bound.
/// Throws DivergenceError when the integral diverges (the kernel family is
/// never area-integrable on the full half-plane theta = pi/2).
BergmanNorm bergman_norm_detailed(const MemoryKernel& f, const SectorSpec& spec);
double bergman_norm(const MemoryKernel& f, const SectorSpec& spec);
double bergman_norm(const ShiftedKernel& f, const SectorSpec& spec);

/// Parameters of the sector-to-halfline embedding
///   (integral_0^R ||f||^{p} dt)^{1/p} <= C_R ||f||_{B^q_theta},  p = q(s-1)/s,
/// assembled from a Cauchy-formula contour of two circle segments. The free
/// contour angle alpha must keep tan(theta) * cos(alpha) < 1.
struct EmbeddingParams {
    double s;      // (1, 2)
    double q;      // > 2
    double theta;  // (0, pi/2]; at pi/2 a proxy angle pi/4 enters the constants
    double alpha;  // (0, pi/2)

    /// Default contour angle arccos(min(0.9, 0.9/tan(theta))), which keeps
    /// tan(theta) cos(alpha) <= 0.9 for every admissible theta.
    static EmbeddingParams with_default_angle(double s, double q, double theta);

    double effective_theta() const;
    double a() const;       // tan(effective theta)
    double c() const;       // cos(alpha)
    double p() const;       // q(s-1)/s
    double s_conjugate() const;
    double c1() const;      // Jacobian lower-bound slope
    double delta(double R) const { return R * (1.0 - c()) * a(); }

    void validate() const;
};

/// C_R of the embedding above; monotone increasing in R with C_R -> 0 as
/// R -> 0.
double embedding_constant(const EmbeddingParams& params, double R);

struct EmbeddingConstant {
    double value;
    double alpha_used;
};

/// Minimizes C_R over the admissible contour angles (the default angle is in
/// the candidate set, so the result never exceeds embedding_constant()).
EmbeddingConstant embedding_constant_optimized(const EmbeddingParams& params, double R);

/// Pair (s, p) with s in (1,2) and p = q(s-1)/s <= l for given q, l > 1.
/// p > 1 is achievable exactly when q > 2; in that regime the returned pair
/// always satisfies 1 < p <= l. Ties break at the midpoint of the admissible
/// s-interval.
struct ExponentChoice {
    double s;
    double p;
};
ExponentChoice choose_exponents(double q, double l);

/// Translation semigroup action f -> f(. + t). The exponential family is
/// invariant: translate_exponential returns the exact in-family image.
ShiftedKernel translate(const MemoryKernel& f, double t);
MemoryKernel translate_exponential(const MemoryKernel& f, double t);

}  // namespace volreg
