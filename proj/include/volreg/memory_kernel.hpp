#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace volreg {

enum class KernelFamily { exponential, monomial_exponential };

/// Scalar memory kernel a(z) = beta * z^m * e^{-gamma z}, holomorphic on
/// every sector of half-angle below pi/2. The exponential family is m = 0;
/// beta = 0 is the memoryless degenerate member.
class MemoryKernel {
public:
    static MemoryKernel exponential(double beta, double gamma);
    static MemoryKernel monomial_exponential(double beta, double gamma, int m);

    /// CLI grammar: "exp:beta,gamma" or "mexp:beta,gamma,m" (decimal literals).
    static MemoryKernel parse(std::string_view spec);
    std::string spec_string() const;

    KernelFamily family() const {
        return m_ == 0 ? KernelFamily::exponential : KernelFamily::monomial_exponential;
    }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    int monomial_degree() const { return m_; }

    /// Closed-form value for Re z > 0 (Re z = 0 permitted when m = 0).
    std::complex<double> eval(std::complex<double> z) const;
    double eval_real(double t) const;

    /// (integral_0^T |a(t)|^p dt)^{1/p} by adaptive quadrature; T may be
    /// infinite, in which case the integral is truncated at 50/gamma and a
    /// certified tail bound is folded into the accuracy check.
    double lp_halfline_norm(double p, double T) const;

private:
    MemoryKernel(double beta, double gamma, int m) : beta_(beta), gamma_(gamma), m_(m) {}
    double beta_;
    double gamma_;
    int m_;
};

/// Evaluator for z -> base(z + shift), the translation semigroup acting on a
/// kernel. For the exponential family the result collapses back into the
/// family (see translate()).
struct ShiftedKernel {
    MemoryKernel base;
    double shift = 0.0;

    std::complex<double> eval(std::complex<double> z) const {
        return base.eval(z + std::complex<double>(shift, 0.0));
    }
};

}  // namespace volreg
