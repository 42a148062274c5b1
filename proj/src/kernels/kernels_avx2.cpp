#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "mt/kernels.hpp"

namespace mt::kernels::avx2 {

void axpy(std::size_t n, double a, const double* x, double* y) {
    std::size_t i = 0;
    __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, vx, vy));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, double* x) {
    std::size_t i = 0;
    __m256d va = _mm256_set1_pd(a);
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double sum_sq(std::size_t n, const double* x) {
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sum_sq_cplx(std::size_t n, const std::complex<double>* z) {
    return sum_sq(2 * n, reinterpret_cast<const double*>(z));
}

void cmul(std::size_t n, const std::complex<double>* a, const std::complex<double>* b,
          std::complex<double>* out) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    // Two complex numbers per 256-bit lane: [re0 im0 re1 im1].
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        __m256d b_re = _mm256_movedup_pd(vb);                     // [br0 br0 br1 br1]
        __m256d b_im = _mm256_permute_pd(vb, 0b1111);             // [bi0 bi0 bi1 bi1]
        __m256d a_sw = _mm256_permute_pd(va, 0b0101);             // [ai0 ar0 ai1 ar1]
        __m256d t = _mm256_mul_pd(a_sw, b_im);                    // [ai*bi ar*bi ...]
        __m256d r = _mm256_fmaddsub_pd(va, b_re, t);              // [ar*br-ai*bi ai*br+ar*bi]
        _mm256_storeu_pd(po + 2 * i, r);
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void cmul_real(std::size_t n, const double* w, std::complex<double>* z) {
    double* d = reinterpret_cast<double*>(z);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m128d vw = _mm_loadu_pd(w + i);
        __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(vw), 0b01010000);
        __m256d vz = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(vz, ww));
    }
    for (; i < n; ++i) {
        d[2 * i] *= w[i];
        d[2 * i + 1] *= w[i];
    }
}

void wave_row(std::size_t n, const double* u, const double* un, const double* us,
              const double* up, const double* k, double* out) {
    std::size_t i = 0;
    __m256d two = _mm256_set1_pd(2.0);
    __m256d four = _mm256_set1_pd(4.0);
    for (; i + 4 <= n; i += 4) {
        __m256d uc = _mm256_loadu_pd(u + i);
        __m256d ul = _mm256_loadu_pd(u + i - 1);
        __m256d ur = _mm256_loadu_pd(u + i + 1);
        __m256d vn = _mm256_loadu_pd(un + i);
        __m256d vs = _mm256_loadu_pd(us + i);
        __m256d vp = _mm256_loadu_pd(up + i);
        __m256d vk = _mm256_loadu_pd(k + i);
        __m256d lap = _mm256_add_pd(_mm256_add_pd(ul, ur), _mm256_add_pd(vn, vs));
        lap = _mm256_fnmadd_pd(four, uc, lap);
        __m256d r = _mm256_fmsub_pd(two, uc, vp);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vk, lap, r));
    }
    for (; i < n; ++i) {
        double lap = u[i - 1] + u[i + 1] + un[i] + us[i] - 4.0 * u[i];
        out[i] = 2.0 * u[i] - up[i] + k[i] * lap;
    }
}

}  // namespace mt::kernels::avx2

#endif  // x86_64
