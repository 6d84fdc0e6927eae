#include "volreg/simd.hpp"

#include <atomic>

#include "volreg/errors.hpp"

namespace volreg::simd {

namespace {

struct Table {
    decltype(&scalar::vmul) vmul;
    decltype(&scalar::axpy) axpy;
    decltype(&scalar::dot) dot;
    decltype(&scalar::weighted_sumsq) weighted_sumsq;
    decltype(&scalar::step2) step2;
};

constexpr Table kScalarTable{&scalar::vmul, &scalar::axpy, &scalar::dot,
                             &scalar::weighted_sumsq, &scalar::step2};

#if defined(VOLREG_HAVE_AVX2_TU)
constexpr Table kAvx2Table{&avx2::vmul, &avx2::axpy, &avx2::dot,
                           &avx2::weighted_sumsq, &avx2::step2};
#endif

std::atomic<const Table*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const Table& table() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        auto_select();
        t = g_table.load(std::memory_order_acquire);
    }
    return *t;
}

}  // namespace

bool avx2_available() {
#if defined(VOLREG_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void force_isa(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            g_table.store(&kScalarTable, std::memory_order_release);
            g_isa.store(Isa::scalar, std::memory_order_release);
            return;
        case Isa::avx2:
#if defined(VOLREG_HAVE_AVX2_TU)
            if (avx2_available()) {
                g_table.store(&kAvx2Table, std::memory_order_release);
                g_isa.store(Isa::avx2, std::memory_order_release);
                return;
            }
#endif
            throw ValidationError("simd: avx2 not available on this cpu/build");
    }
    throw ValidationError("simd: unknown isa");
}

void auto_select() {
    force_isa(avx2_available() ? Isa::avx2 : Isa::scalar);
}

Isa active_isa() {
    table();
    return g_isa.load(std::memory_order_acquire);
}

std::string_view isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

void vmul(double* dst, const double* a, const double* b, std::size_t n) {
    table().vmul(dst, a, b, n);
}

void axpy(double* y, double c, const double* x, std::size_t n) {
    table().axpy(y, c, x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
    return table().dot(x, y, n);
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
    return table().weighted_sumsq(w, x, n);
}

void step2(double* zout, double* wout, const double* z, const double* w,
           const double* g, const double* e11, const double* e12, const double* p1,
           const double* e21, const double* e22, const double* p2, std::size_t n) {
    table().step2(zout, wout, z, w, g, e11, e12, p1, e21, e22, p2, n);
}

}  // namespace volreg::simd
