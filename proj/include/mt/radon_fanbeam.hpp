#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mt/radon_parallel.hpp"

namespace mt {

/// Line-integral data in fan-beam coordinates: source at R*omega(alpha),
/// ray angle beta from the inward radial direction. alpha on [0, 2*pi)
/// half-open, beta on [-pi/2, pi/2) half-open; the tangent rays at
/// beta = +-pi/2 carry zero chord length.
struct FanSinogram {
    int alpha_count = 0;
    int beta_count = 0;
    double R = 1.0;  // source circle radius
    double h = 1.0;
    bool weighted = false;
    std::vector<double> values;  // values[i * beta_count + j]

    double dalpha() const { return kTwoPi / alpha_count; }
    double dbeta() const { return kPi / beta_count; }
    double alpha(int i) const { return i * dalpha(); }
    double beta(int j) const { return -kPi / 2.0 + j * dbeta(); }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * beta_count + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * beta_count + j]; }

    Grid2D as_grid() const;
};

FanSinogram make_fan_sinogram(int alpha_count, int beta_count, double R, double h);

struct FanCotangent {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
};

/// (alpha, beta) -> (phi, p) = (alpha + beta - pi/2, R sin beta).
std::pair<double, double> fan_to_parallel(double alpha, double beta, double R);
/// Inverse coordinate change; requires |p| <= R.
std::pair<double, double> parallel_to_fan(double phi, double p, double R);

/// The data-side symmetry exchanging the two branch images:
/// (alpha, beta, alpha_hat, beta_hat) -> (alpha + 2 beta - pi, -beta,
/// alpha_hat, 2 alpha_hat - beta_hat).
FanCotangent fan_symmetry(const FanCotangent& q);

/// Graph map (x, xi) -> (alpha, beta, alpha_hat, beta_hat) on a branch.
FanCotangent canonical_forward_fan(Vec2 x, Vec2 xi, double R, int sign);
/// Inverse graph map; requires beta_hat != alpha_hat and |beta| < pi/2.
std::pair<Vec2, Vec2> canonical_inverse_fan(const FanCotangent& q, double R);

/// Nyquist steps (s_alpha, s_beta) = (pi/(R*B), pi/(2*R*B)).
std::pair<double, double> nyquist_rates_fan(double R, double B);

/// The efficient fan lattice W = (pi/(R*B)) diag(2, 1).
Lattice2D fan_efficient_lattice(double R, double B, double h);

/// Range region in (alpha_hat, beta_hat) at fixed beta:
/// |alpha_hat| <= |beta_hat - alpha_hat| <= R*B*cos(beta).
FrequencyRegion range_triangle(double beta, double R, double B);

enum class DiagramMode { intersection, union_ };

/// Largest resolvable |xi| at x in unit direction theta given the fan rates;
/// intersection uses both ray branches (full data), union the better one.
double resolution_diagram(Vec2 x, double s_alpha, double s_beta, double R, DiagramMode mode,
                          double theta);

/// Two-branch fan blur symbol
/// 1/2 psi(a c^2 + b (c+D)^2) + 1/2 psi(a c^2 + b (c-D)^2)
/// with c = x.xi_perp and D = sqrt(R^2 |xi|^2 - (x.xi)^2).
std::function<double(Vec2, Vec2)> blur_symbol_fan(double a, double b,
                                                  std::function<double(double)> psi, double R);

/// Weighted line integrals along the fan rays.
FanSinogram fan_forward(const Grid2D& f, const WeightFn& weight, const FanSinogram& geometry);

/// Resampling of a fan sinogram onto a parallel (phi, p) grid by separable
/// lanczos3 interpolation (periodic in alpha).
ParallelSinogram rebin_to_parallel(const FanSinogram& fan, int phi_count, int p_count);

/// Forward projection followed by rebinning and parallel filtered
/// back-projection. A restricted source range [alpha_lo, alpha_hi] is
/// cosine-tapered over 5 degrees at each cut before inversion and the
/// output is rescaled by the covered fraction of the circle.
std::pair<FanSinogram, Grid2D> fan_forward_and_fbp(const Grid2D& f, const FanSinogram& geometry,
                                                   const WindowSpec& window, const Grid2D& target,
                                                   double alpha_lo = 0.0, double alpha_hi = kTwoPi);

}  // namespace mt
