#include "volreg/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "volreg/errors.hpp"
#include "volreg/quadrature.hpp"

namespace volreg {

namespace {

constexpr double kPi = std::numbers::pi;

struct KernelShape {
    double beta;   // amplitude after absorbing any shift
    double gamma;  // exponential decay rate in Re z
    int m;         // monomial degree
    double shift;  // evaluation offset along the real axis
};

double abs_eval_pow_q(const KernelShape& k, double tau, double sigma, double q) {
    // |beta (z+shift)^m e^{-gamma (z+shift)}|^q for z = tau + i sigma.
    const double xr = tau + k.shift;
    const double mod2 = xr * xr + sigma * sigma;
    const double log_abs = std::log(k.beta) + 0.5 * k.m * std::log(std::max(mod2, 1e-300)) -
                           k.gamma * xr;
    return std::exp(q * log_abs);
}

void check_halfplane_integrability(const KernelShape& k, double q) {
    // On theta = pi/2 the slice integral over sigma must decay; probe the
    // integrand at growing heights and require a decaying ratio.
    const double tau = 1.0 / k.gamma;
    const double s1 = 1e3, s2 = 2e3;
    const double v1 = abs_eval_pow_q(k, tau, s1, q);
    const double v2 = abs_eval_pow_q(k, tau, s2, q);
    // Integrable needs |f|^q ~ sigma^{-(1+eps)}: ratio below (s1/s2)^1 = 0.5.
    if (!(v1 > 0.0) || v2 / v1 >= 0.5) {
        throw DivergenceError(
            "bergman_norm: integrand does not decay along the imaginary direction; "
            "the sector integral diverges for theta = pi/2");
    }
}

BergmanNorm sector_norm(const KernelShape& k, const SectorSpec& spec) {
    if (!(spec.q > 1.0)) throw ValidationError("bergman_norm: q must exceed 1");
    if (!(spec.theta > 0.0) || spec.theta > kPi / 2.0 + 1e-15) {
        throw ValidationError("bergman_norm: theta must lie in (0, pi/2]");
    }
    if (k.beta == 0.0) return {0.0, 0.0};
    if (spec.theta >= kPi / 2.0 - 1e-12) check_halfplane_integrability(k, spec.q);

    const double a = std::tan(spec.theta);
    const double sec = 1.0 / std::cos(spec.theta);
    const double q = spec.q;
    const double L = 50.0 / k.gamma;

    double inner_err_acc = 0.0;
    auto slice = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        const double half_width = a * tau;
        auto g = [&](double sigma) { return abs_eval_pow_q(k, tau, sigma, q); };
        QuadResult r = adaptive_simpson(g, 0.0, half_width, 1e-12);
        inner_err_acc = std::max(inner_err_acc, r.error_estimate);
        return 2.0 * r.value;  // symmetric in sigma (real coefficients)
    };

    QuadResult outer = adaptive_simpson(slice, 0.0, L, 1e-10);

    // Tail bound for tau >= L: |f| <= beta sec^m (tau + shift)^m e^{-gamma tau}
    // e^{-gamma shift}..., and (tau+shift)^{mq} tau e^{-q gamma tau / 2} is
    // decreasing there, leaving a pure exponential to integrate.
    const double mq = static_cast<double>(k.m) * q;
    double tail = 2.0 * a * std::pow(k.beta, q) * std::pow(sec, mq) *
                  std::pow(L + k.shift, mq) * L * std::exp(-q * k.gamma * (L + k.shift)) * 2.0 /
                  (q * k.gamma);
    if (!std::isfinite(tail)) tail = 0.0;  // underflow of the exponential

    const double integral = outer.value;
    if (!outer.converged) {
        throw NumericalError("bergman_norm: outer quadrature did not converge");
    }
    if (!(integral >= 0.0) || !std::isfinite(integral)) {
        throw DivergenceError("bergman_norm: sector integral is not finite");
    }
    const double value = std::pow(integral, 1.0 / q);
    const double abs_err_q = outer.error_estimate + tail + inner_err_acc;
    const double norm_err =
        integral > 0.0 ? value * abs_err_q / (q * integral) : std::pow(abs_err_q, 1.0 / q);
    return {value, norm_err};
}

}  // namespace

BergmanNorm bergman_norm_detailed(const MemoryKernel& f, const SectorSpec& spec) {
    return sector_norm({f.beta(), f.gamma(), f.monomial_degree(), 0.0}, spec);
}

double bergman_norm(const MemoryKernel& f, const SectorSpec& spec) {
    return bergman_norm_detailed(f, spec).value;
}

double bergman_norm(const ShiftedKernel& f, const SectorSpec& spec) {
    return sector_norm({f.base.beta(), f.base.gamma(), f.base.monomial_degree(), f.shift}, spec)
        .value;
}

EmbeddingParams EmbeddingParams::with_default_angle(double s, double q, double theta) {
    EmbeddingParams p{s, q, theta, 0.0};
    const double a = std::tan(p.effective_theta());
    p.alpha = std::acos(std::min(0.9, 0.9 / a));
    p.validate();
    return p;
}

double EmbeddingParams::effective_theta() const {
    return theta >= kPi / 2.0 - 1e-12 ? kPi / 4.0 : theta;
}

double EmbeddingParams::a() const { return std::tan(effective_theta()); }
double EmbeddingParams::c() const { return std::cos(alpha); }
double EmbeddingParams::p() const { return q * (s - 1.0) / s; }
double EmbeddingParams::s_conjugate() const { return s / (s - 1.0); }

double EmbeddingParams::c1() const {
    const double av = a(), cv = c();
    return av * (cv * (1.0 - av * cv) + av) / (1.0 + av * (1.0 - cv));
}

void EmbeddingParams::validate() const {
    if (!(s > 1.0 && s < 2.0)) throw ValidationError("embedding: s must lie in (1, 2)");
    if (!(q > 2.0)) throw ValidationError("embedding: q must exceed 2");
    if (!(theta > 0.0) || theta > kPi / 2.0 + 1e-15) {
        throw ValidationError("embedding: theta must lie in (0, pi/2]");
    }
    if (!(alpha > 0.0 && alpha < kPi / 2.0)) {
        throw ValidationError("embedding: contour angle must lie in (0, pi/2)");
    }
    if (!(a() * c() < 1.0)) {
        throw ValidationError("embedding: contour requires tan(theta) * cos(alpha) < 1");
    }
}

double embedding_constant(const EmbeddingParams& params, double R) {
    params.validate();
    if (!(R > 0.0)) throw ValidationError("embedding_constant: R must be positive");
    const double s = params.s;
    const double p = params.p();
    const double a = params.a();
    const double c = params.c();
    const double alpha = params.alpha;

    // Hoelder step over the segment image:
    //   C~ = (2 a sin alpha)^{1/s} / c1 * (1 + a(1-c))^{(2-s)/s} / (2-s)^{1/s}.
    const double c_tilde = std::pow(2.0 * a * std::sin(alpha), 1.0 / s) / params.c1() *
                           std::pow(1.0 + a * (1.0 - c), (2.0 - s) / s) /
                           std::pow(2.0 - s, 1.0 / s);
    // Cauchy-segment prefactor (4 alpha)^{p-1} / (2 pi (1-c))^p, two segments.
    const double prefactor =
        std::pow(4.0 * alpha, p - 1.0) / std::pow(2.0 * kPi * (1.0 - c), p);
    return std::pow(2.0 * c_tilde * std::pow(R, (2.0 - s) / s) * prefactor, 1.0 / p);
}

EmbeddingConstant embedding_constant_optimized(const EmbeddingParams& params, double R) {
    params.validate();
    const double a = params.a();
    // Admissible contour angles: cos(alpha) < 1/a (automatic for a < 1).
    const double lo = a > 1.0 ? std::acos(1.0 / a) : 0.0;
    const double hi = kPi / 2.0;
    double best = embedding_constant(params, R);
    double best_alpha = params.alpha;
    const int n = 256;
    for (int i = 1; i < n; ++i) {
        EmbeddingParams trial = params;
        trial.alpha = lo + (hi - lo) * i / n;
        if (!(trial.a() * trial.c() < 1.0)) continue;
        const double v = embedding_constant(trial, R);
        if (v < best) {
            best = v;
            best_alpha = trial.alpha;
        }
    }
    return {best, best_alpha};
}

ExponentChoice choose_exponents(double q, double l) {
    if (!(q > 1.0) || !(l > 1.0)) throw ValidationError("choose_exponents: q and l must exceed 1");
    // Case intervals for s:
    //   q <= l   : any s with p > 1 (possible only when q > 2)
    //   q >= 2l  : s in (1, q/(q-l)]
    //   l<q<2l   : all of (1, 2)
    double lo = 1.0, hi = 2.0;
    if (q <= l) {
        if (q > 2.0) lo = q / (q - 1.0);
    } else if (q >= 2.0 * l) {
        hi = q / (q - l);
    }
    double s = 0.5 * (lo + hi);
    double p = q * (s - 1.0) / s;
    if (p <= 1.0 && q > 2.0) {
        // The literal case interval can undershoot p = 1 near q = 2; restrict
        // to the exact admissible interval (q/(q-1), min(2, q/(q-l))).
        lo = q / (q - 1.0);
        hi = q > l ? std::min(2.0, q / (q - l)) : 2.0;
        s = 0.5 * (lo + hi);
        p = q * (s - 1.0) / s;
    }
    return {s, p};
}

ShiftedKernel translate(const MemoryKernel& f, double t) {
    if (t < 0.0) throw ValidationError("translate: shift must be nonnegative");
    return ShiftedKernel{f, t};
}

MemoryKernel translate_exponential(const MemoryKernel& f, double t) {
    if (t < 0.0) throw ValidationError("translate: shift must be nonnegative");
    if (f.monomial_degree() != 0) {
        throw ValidationError("translate_exponential: only the exponential family is closed under translation");
    }
    return MemoryKernel::exponential(f.beta() * std::exp(-f.gamma() * t), f.gamma());
}

}  // namespace volreg
