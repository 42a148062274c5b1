#pragma once

#include <complex>
#include <cstddef>

// Inner-loop kernels with scalar reference implementations and AVX2 variants
// selected at runtime. The scalar versions are the semantic reference; the
// vectorized ones must agree to floating-point reassociation tolerance and are
// checked against the reference in the test suite.

namespace mt::kernels {

/// y[i] += a * x[i]
void axpy(std::size_t n, double a, const double* x, double* y);

/// x[i] *= a
void scale(std::size_t n, double a, double* x);

/// Sum of squares of x.
double sum_sq(std::size_t n, const double* x);

/// Sum of |z|^2 over complex z.
double sum_sq_cplx(std::size_t n, const std::complex<double>* z);

/// out[i] = a[i] * b[i] (complex pointwise product).
void cmul(std::size_t n, const std::complex<double>* a, const std::complex<double>* b,
          std::complex<double>* out);

/// Pointwise multiply complex array by a real window: z[i] *= w[i].
void cmul_real(std::size_t n, const double* w, std::complex<double>* z);

/// One leapfrog row update for the 5-point wave stencil:
///   out[i] = 2*u[i] - up[i] + k[i] * (u[i-1] + u[i+1] + un[i] + us[i] - 4*u[i])
/// Interior cells only; the caller handles boundary columns.
void wave_row(std::size_t n, const double* u, const double* un, const double* us,
              const double* up, const double* k, double* out);

/// Name of the active dispatch target ("scalar" or "avx2").
const char* active_target();

/// Force the scalar path (for equivalence tests). Passing false restores
/// runtime detection.
void force_scalar(bool on);

}  // namespace mt::kernels
