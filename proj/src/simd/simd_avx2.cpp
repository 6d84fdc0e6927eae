#include "volreg/simd.hpp"

#if defined(VOLREG_HAVE_AVX2_TU)

#include <immintrin.h>

namespace volreg::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

void vmul(double* dst, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void axpy(double* y, double c, const double* x, std::size_t n) {
    __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        __m256d y1 = _mm256_loadu_pd(y + i + 4);
        y0 = _mm256_fmadd_pd(vc, _mm256_loadu_pd(x + i), y0);
        y1 = _mm256_fmadd_pd(vc, _mm256_loadu_pd(x + i + 4), y1);
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        y0 = _mm256_fmadd_pd(vc, _mm256_loadu_pd(x + i), y0);
        _mm256_storeu_pd(y + i, y0);
    }
    for (; i < n; ++i) y[i] += c * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vwx = _mm256_mul_pd(_mm256_loadu_pd(w + i), vx);
        acc = _mm256_fmadd_pd(vwx, vx, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * x[i] * x[i];
    return s;
}

void step2(double* zout, double* wout, const double* z, const double* w,
           const double* g, const double* e11, const double* e12, const double* p1,
           const double* e21, const double* e22, const double* p2, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vz = _mm256_loadu_pd(z + i);
        __m256d vw = _mm256_loadu_pd(w + i);
        __m256d vg = _mm256_loadu_pd(g + i);
        __m256d zo = _mm256_mul_pd(_mm256_loadu_pd(e11 + i), vz);
        zo = _mm256_fmadd_pd(_mm256_loadu_pd(e12 + i), vw, zo);
        zo = _mm256_fmadd_pd(_mm256_loadu_pd(p1 + i), vg, zo);
        __m256d wo = _mm256_mul_pd(_mm256_loadu_pd(e21 + i), vz);
        wo = _mm256_fmadd_pd(_mm256_loadu_pd(e22 + i), vw, wo);
        wo = _mm256_fmadd_pd(_mm256_loadu_pd(p2 + i), vg, wo);
        _mm256_storeu_pd(zout + i, zo);
        _mm256_storeu_pd(wout + i, wo);
    }
    for (; i < n; ++i) {
        const double zi = z[i], wi = w[i], gi = g[i];
        zout[i] = e11[i] * zi + e12[i] * wi + p1[i] * gi;
        wout[i] = e21[i] * zi + e22[i] * wi + p2[i] * gi;
    }
}

}  // namespace volreg::simd::avx2

#endif  // VOLREG_HAVE_AVX2_TU
