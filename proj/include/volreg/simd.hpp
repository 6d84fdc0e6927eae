#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner kernels used by the spectral state operations and the
// time steppers. Scalar reference implementations always exist; on x86-64 an
// AVX2+FMA variant is compiled into its own translation unit and selected at
// runtime. The two variants are equivalence-tested against each other.

namespace volreg::simd {

enum class Isa { scalar, avx2 };

/// ISA currently used by the dispatched entry points.
Isa active_isa();

/// Force a specific ISA (throws ValidationError if unavailable on this CPU).
void force_isa(Isa isa);

/// Pick the best ISA the CPU supports. Called implicitly on first use.
void auto_select();

bool avx2_available();

std::string_view isa_name(Isa isa);

// Dispatched kernels. All arrays may be unaligned; dst may alias an input of
// elementwise kernels but not partially overlap it.

/// dst[i] = a[i] * b[i]
void vmul(double* dst, const double* a, const double* b, std::size_t n);

/// y[i] += c * x[i]
void axpy(double* y, double c, const double* x, std::size_t n);

/// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

/// sum_i w[i] * x[i]^2
double weighted_sumsq(const double* w, const double* x, std::size_t n);

/// Coupled two-component diagonal propagator step:
///   zout[i] = e11[i]*z[i] + e12[i]*w[i] + p1[i]*g[i]
///   wout[i] = e21[i]*z[i] + e22[i]*w[i] + p2[i]*g[i]
/// zout/wout must not alias z/w/g.
void step2(double* zout, double* wout, const double* z, const double* w,
           const double* g, const double* e11, const double* e12, const double* p1,
           const double* e21, const double* e22, const double* p2, std::size_t n);

// Reference (scalar) entry points, always available; used directly by the
// equivalence tests and as the dispatch fallback.
namespace scalar {
void vmul(double* dst, const double* a, const double* b, std::size_t n);
void axpy(double* y, double c, const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double weighted_sumsq(const double* w, const double* x, std::size_t n);
void step2(double* zout, double* wout, const double* z, const double* w,
           const double* g, const double* e11, const double* e12, const double* p1,
           const double* e21, const double* e22, const double* p2, std::size_t n);
}  // namespace scalar

#if defined(VOLREG_HAVE_AVX2_TU)
namespace avx2 {
void vmul(double* dst, const double* a, const double* b, std::size_t n);
void axpy(double* y, double c, const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double weighted_sumsq(const double* w, const double* x, std::size_t n);
void step2(double* zout, double* wout, const double* z, const double* w,
           const double* g, const double* e11, const double* e12, const double* p1,
           const double* e21, const double* e22, const double* p2, std::size_t n);
}  // namespace avx2
#endif

}  // namespace volreg::simd
