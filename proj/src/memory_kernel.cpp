#include "volreg/memory_kernel.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "volreg/errors.hpp"
#include "volreg/quadrature.hpp"

namespace volreg {

namespace {

double parse_double(std::string_view s, const char* what) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError(std::string("kernel spec: bad ") + what + " literal '" +
                              std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = s.find(sep);
        if (pos == std::string_view::npos) {
            parts.push_back(s);
            return parts;
        }
        parts.push_back(s.substr(0, pos));
        s.remove_prefix(pos + 1);
    }
}

}  // namespace

MemoryKernel MemoryKernel::exponential(double beta, double gamma) {
    if (!(beta >= 0.0) || !(gamma > 0.0)) {
        throw ValidationError("MemoryKernel: beta must be nonnegative and gamma positive");
    }
    return MemoryKernel(beta, gamma, 0);
}

MemoryKernel MemoryKernel::monomial_exponential(double beta, double gamma, int m) {
    if (!(beta >= 0.0) || !(gamma > 0.0)) {
        throw ValidationError("MemoryKernel: beta must be nonnegative and gamma positive");
    }
    if (m < 0) throw ValidationError("MemoryKernel: monomial degree must be nonnegative");
    return MemoryKernel(beta, gamma, m);
}

MemoryKernel MemoryKernel::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ValidationError("kernel spec: expected 'exp:beta,gamma' or 'mexp:beta,gamma,m'");
    }
    const std::string_view head = spec.substr(0, colon);
    const auto args = split(spec.substr(colon + 1), ',');
    if (head == "exp") {
        if (args.size() != 2) throw ValidationError("kernel spec: exp takes beta,gamma");
        return exponential(parse_double(args[0], "beta"), parse_double(args[1], "gamma"));
    }
    if (head == "mexp") {
        if (args.size() != 3) throw ValidationError("kernel spec: mexp takes beta,gamma,m");
        const double md = parse_double(args[2], "m");
        const int m = static_cast<int>(md);
        if (md != m) throw ValidationError("kernel spec: m must be an integer");
        return monomial_exponential(parse_double(args[0], "beta"), parse_double(args[1], "gamma"), m);
    }
    throw ValidationError("kernel spec: unknown family '" + std::string(head) + "'");
}

std::string MemoryKernel::spec_string() const {
    char buf[96];
    if (m_ == 0) {
        std::snprintf(buf, sizeof(buf), "exp:%.17g,%.17g", beta_, gamma_);
    } else {
        std::snprintf(buf, sizeof(buf), "mexp:%.17g,%.17g,%d", beta_, gamma_, m_);
    }
    return buf;
}

std::complex<double> MemoryKernel::eval(std::complex<double> z) const {
    if (z.real() < 0.0 || (z.real() == 0.0 && m_ != 0 && z.imag() != 0.0)) {
        throw ValidationError("MemoryKernel::eval: argument outside the guaranteed sector (Re z >= 0)");
    }
    std::complex<double> zm(1.0, 0.0);
    for (int i = 0; i < m_; ++i) zm *= z;
    return beta_ * zm * std::exp(-gamma_ * z);
}

double MemoryKernel::eval_real(double t) const {
    if (t < 0.0) throw ValidationError("MemoryKernel::eval_real: t must be nonnegative");
    return beta_ * std::pow(t, m_) * std::exp(-gamma_ * t);
}

double MemoryKernel::lp_halfline_norm(double p, double T) const {
    if (!(p >= 1.0)) throw ValidationError("lp_halfline_norm: p must be >= 1");
    if (T < 0.0) throw ValidationError("lp_halfline_norm: horizon must be nonnegative");
    if (T == 0.0) return 0.0;

    double cutoff = T;
    double tail = 0.0;
    if (!std::isfinite(T)) {
        cutoff = 50.0 / gamma_;
        // |a|^p = beta^p t^{mp} e^{-p gamma t}; for t >= cutoff the factor
        // t^{mp} e^{-p gamma t / 2} is decreasing (cutoff >= 2m/gamma), so
        //   tail <= beta^p cutoff^{mp} e^{-p gamma cutoff} * 2/(p gamma).
        tail = std::pow(beta_, p) * std::pow(cutoff, m_ * p) *
               std::exp(-p * gamma_ * cutoff) * 2.0 / (p * gamma_);
    }

    auto integrand = [&](double t) { return std::pow(std::abs(eval_real(t)), p); };
    QuadResult r = adaptive_simpson(integrand, 0.0, cutoff, 1e-12);
    const double total_err = r.error_estimate + tail;
    if (!r.converged || (r.value > 0.0 && total_err / r.value > 1e-9)) {
        throw NumericalError("lp_halfline_norm: achieved relative tolerance " +
                             std::to_string(r.value > 0 ? total_err / r.value : total_err) +
                             " exceeds 1e-9");
    }
    return std::pow(r.value + tail, 1.0 / p);
}

}  // namespace volreg
