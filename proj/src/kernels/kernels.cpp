#include "mt/kernels.hpp"

#include <atomic>

namespace mt::kernels {

namespace scalar {
void axpy(std::size_t, double, const double*, double*);
void scale(std::size_t, double, double*);
double sum_sq(std::size_t, const double*);
double sum_sq_cplx(std::size_t, const std::complex<double>*);
void cmul(std::size_t, const std::complex<double>*, const std::complex<double>*,
          std::complex<double>*);
void cmul_real(std::size_t, const double*, std::complex<double>*);
void wave_row(std::size_t, const double*, const double*, const double*, const double*,
              const double*, double*);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(std::size_t, double, const double*, double*);
void scale(std::size_t, double, double*);
double sum_sq(std::size_t, const double*);
double sum_sq_cplx(std::size_t, const std::complex<double>*);
void cmul(std::size_t, const std::complex<double>*, const std::complex<double>*,
          std::complex<double>*);
void cmul_real(std::size_t, const double*, std::complex<double>*);
void wave_row(std::size_t, const double*, const double*, const double*, const double*,
              const double*, double*);
}  // namespace avx2
#endif

namespace {

std::atomic<bool> g_force_scalar{false};

bool use_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return has && !g_force_scalar.load(std::memory_order_relaxed);
#else
    return false;
#endif
}

}  // namespace

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

const char* active_target() { return use_avx2() ? "avx2" : "scalar"; }

void axpy(std::size_t n, double a, const double* x, double* y) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::axpy(n, a, x, y);
#endif
    scalar::axpy(n, a, x, y);
}

void scale(std::size_t n, double a, double* x) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::scale(n, a, x);
#endif
    scalar::scale(n, a, x);
}

double sum_sq(std::size_t n, const double* x) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::sum_sq(n, x);
#endif
    return scalar::sum_sq(n, x);
}

double sum_sq_cplx(std::size_t n, const std::complex<double>* z) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::sum_sq_cplx(n, z);
#endif
    return scalar::sum_sq_cplx(n, z);
}

void cmul(std::size_t n, const std::complex<double>* a, const std::complex<double>* b,
          std::complex<double>* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::cmul(n, a, b, out);
#endif
    scalar::cmul(n, a, b, out);
}

void cmul_real(std::size_t n, const double* w, std::complex<double>* z) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::cmul_real(n, w, z);
#endif
    scalar::cmul_real(n, w, z);
}

void wave_row(std::size_t n, const double* u, const double* un, const double* us,
              const double* up, const double* k, double* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (use_avx2()) return avx2::wave_row(n, u, un, us, up, k, out);
#endif
    scalar::wave_row(n, u, un, us, up, k, out);
}

}  // namespace mt::kernels
