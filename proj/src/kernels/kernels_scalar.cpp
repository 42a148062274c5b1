#include "mt/kernels.hpp"

namespace mt::kernels::scalar {

void axpy(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(std::size_t n, double a, double* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_sq(std::size_t n, const double* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sum_sq_cplx(std::size_t n, const std::complex<double>* z) {
    const double* d = reinterpret_cast<const double*>(z);
    return sum_sq(2 * n, d);
}

void cmul(std::size_t n, const std::complex<double>* a, const std::complex<double>* b,
          std::complex<double>* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void cmul_real(std::size_t n, const double* w, std::complex<double>* z) {
    double* d = reinterpret_cast<double*>(z);
    for (std::size_t i = 0; i < n; ++i) {
        d[2 * i] *= w[i];
        d[2 * i + 1] *= w[i];
    }
}

void wave_row(std::size_t n, const double* u, const double* un, const double* us,
              const double* up, const double* k, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double lap = u[i - 1] + u[i + 1] + un[i] + us[i] - 4.0 * u[i];
        out[i] = 2.0 * u[i] - up[i] + k[i] * lap;
    }
}

}  // namespace mt::kernels::scalar
