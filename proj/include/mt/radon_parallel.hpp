#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mt/grid.hpp"
#include "mt/lattice.hpp"

namespace mt {

/// Line-integral data in parallel coordinates (phi, p) on
/// [0, 2*pi) x [p_min, p_max), uniform half-open axes.
struct ParallelSinogram {
    int phi_count = 0;
    int p_count = 0;
    double p_min = 0.0;
    double p_max = 0.0;
    double R = 1.0;  // support radius of the underlying function
    double h = 1.0;
    bool weighted = false;
    std::vector<double> values;  // values[i * p_count + j]

    double dphi() const { return kTwoPi / phi_count; }
    double dp() const { return (p_max - p_min) / p_count; }
    double phi(int i) const { return i * dphi(); }
    double p(int j) const { return p_min + j * dp(); }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * p_count + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * p_count + j]; }

    /// View of the data as a Grid2D over (phi, p) for spectral analysis.
    Grid2D as_grid() const;
};

ParallelSinogram make_parallel_sinogram(int phi_count, int p_count, double p_max, double R,
                                        double h);

/// A covector on the data side: (phi, p) base point with duals (phi_hat, p_hat)
/// in semiclassical units.
struct ParallelCotangent {
    double phi = 0.0;
    double p = 0.0;
    double phi_hat = 0.0;
    double p_hat = 0.0;
};

/// Positive line weight kappa(x, omega).
struct WeightFn {
    std::function<double(Vec2, Vec2)> eval;  // (point, line normal direction)
    bool is_unit = true;

    static WeightFn unit() { return {}; }
    static WeightFn of(std::function<double(Vec2, Vec2)> f) { return {std::move(f), false}; }
    double operator()(Vec2 x, Vec2 omega) const { return is_unit ? 1.0 : eval(x, omega); }
};

/// A point of phase space T*R^2 tagged with the branch sign it came from.
struct PhaseSpacePoint {
    Vec2 x;
    Vec2 xi;
    int sign = +1;
};

/// Weighted line integrals over x.omega(phi) = p by trapezoid quadrature with
/// step <= half the grid spacing and bilinear interpolation.
ParallelSinogram forward(const Grid2D& f, const WeightFn& weight, const ParallelSinogram& geometry);

/// The graph map of the transform: (x, xi) -> (phi, p, phi_hat, p_hat) on the
/// chosen branch (+1 or -1).
ParallelCotangent canonical_forward(Vec2 x, Vec2 xi, int sign);

/// Inverse of the graph map; requires p_hat != 0.
std::pair<Vec2, Vec2> canonical_inverse(const ParallelCotangent& q);

/// Nyquist steps (s_phi, s_p) = (pi/(R*B), pi/B).
std::pair<double, double> nyquist_rates(double R, double B);

/// Region |phi_hat| <= |p_hat| sqrt(R^2 - p^2), |p_hat| <= B.
FrequencyRegion local_triangle(double p, double R, double B);

/// One p-strip of a piecewise sampling plan.
struct StripPlan {
    double p_lo = 0.0;
    double p_hi = 0.0;
    Lattice2D lattice;
};

/// Splits [-R, R] into 2k strips and assigns each the efficient lattice of its
/// local frequency cone.
std::vector<StripPlan> strip_sampling_plan(double R, double B, int k, double h);

/// Total number of plan points over [0, 2*pi) x its strip.
long plan_point_count(const std::vector<StripPlan>& plan);

/// Largest resolvable |xi| at x in unit direction theta for the given rates.
double resolution_limit(Vec2 x, double s_phi, double s_p, double theta);

enum class AliasKind { angular, radial };

/// Predicted aliasing artifacts: the shift by 2*pi*k/s on the phi_hat (angular)
/// or p_hat (radial) dual, mapped back to phase space. Both branch images are
/// reported; inadmissible shifts (outside the Nyquist band) are omitted.
std::vector<PhaseSpacePoint> alias_artifact_predict(Vec2 x, Vec2 xi, double s_phi, double s_p,
                                                    int k, AliasKind which);

/// Filtered back-projection for unit weight: ramp filter apodized by the
/// window transfer function, then back-projection onto the target geometry.
Grid2D fbp_invert(const ParallelSinogram& sino, const WindowSpec& window, const Grid2D& target);

/// Blur symbol psi(a |xi|^2 + b |x.xi_perp|^2) of averaged data.
std::function<double(Vec2, Vec2)> averaged_symbol(double a, double b,
                                                  std::function<double(double)> psi);

/// 1D lanczos3 resampling of a uniformly sampled sequence onto new positions
/// given in units of the source index. Out-of-range positions clamp to zero.
std::vector<double> resample_lanczos3(const std::vector<double>& src,
                                      const std::vector<double>& positions);

}  // namespace mt
