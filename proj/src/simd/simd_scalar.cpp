#include "volreg/simd.hpp"

namespace volreg::simd::scalar {

void vmul(double* dst, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void axpy(double* y, double c, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
    // Four independent accumulators; matches the lane-wise accumulation of the
    // vector variants closely enough for tight equivalence tolerances.
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
        s2 += x[i + 2] * y[i + 2];
        s3 += x[i + 3] * y[i + 3];
    }
    for (; i < n; ++i) s0 += x[i] * y[i];
    return (s0 + s2) + (s1 + s3);
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += w[i] * x[i] * x[i];
        s1 += w[i + 1] * x[i + 1] * x[i + 1];
        s2 += w[i + 2] * x[i + 2] * x[i + 2];
        s3 += w[i + 3] * x[i + 3] * x[i + 3];
    }
    for (; i < n; ++i) s0 += w[i] * x[i] * x[i];
    return (s0 + s2) + (s1 + s3);
}

void step2(double* zout, double* wout, const double* z, const double* w,
           const double* g, const double* e11, const double* e12, const double* p1,
           const double* e21, const double* e22, const double* p2, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double zi = z[i], wi = w[i], gi = g[i];
        zout[i] = e11[i] * zi + e12[i] * wi + p1[i] * gi;
        wout[i] = e21[i] * zi + e22[i] * wi + p2[i] * gi;
    }
}

}  // namespace volreg::simd::scalar
