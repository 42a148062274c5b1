#pragma once

#include <functional>
#include <vector>

#include "mt/grid.hpp"

namespace mt {

/// Acoustic speed c(x) > 0 with cached extremes over the working domain.
struct SpeedField {
    std::function<double(Vec2)> eval;
    double c_min = 1.0;
    double c_max = 1.0;

    double operator()(Vec2 x) const { return eval ? eval(x) : 1.0; }
    double M() const { return 1.0 / c_max; }

    static SpeedField constant(double c);
    /// c(x) = 1 + amp * exp(-2|x|^2); extremes over |x| <= radius.
    static SpeedField lens(double amp, double radius = 1.0);
    static SpeedField custom(std::function<double(Vec2)> f, double c_min, double c_max);
};

/// Wave field observed on a straight boundary segment over time.
struct BoundaryTrace {
    int t_count = 0;
    int y_count = 0;
    double T = 0.0;
    Vec2 seg_a;  // segment endpoints
    Vec2 seg_b;
    double h = 1.0;
    std::vector<double> values;  // values[it * y_count + iy]

    double dt() const { return T / t_count; }
    double seg_length() const { return (seg_b - seg_a).norm(); }
    double& at(int it, int iy) { return values[static_cast<std::size_t>(it) * y_count + iy]; }
    double at(int it, int iy) const { return values[static_cast<std::size_t>(it) * y_count + iy]; }

    /// View over (t, y) for spectral analysis.
    Grid2D as_grid() const;
};

enum class WaveModel { free_space, neumann_reflect };

struct WaveResult {
    BoundaryTrace trace;
    std::vector<Grid2D> snapshots;  // every snapshot_stride steps if requested
    std::vector<double> energy;     // per recorded step (neumann model)
    double dt = 0.0;
    int steps = 0;
};

/// Leapfrog evolution of u_tt = c^2 (u_xx + u_yy) from u(0) = f, u_t(0) = 0.
/// free_space surrounds the domain with an absorbing sponge layer;
/// neumann_reflect uses mirrored ghost cells. The trace records u on the
/// right edge of the domain, trimmed 3 cells from each corner.
WaveResult solve_wave(const Grid2D& f, const SpeedField& speed, WaveModel model, double T,
                      double cfl, int snapshot_stride = 0);

/// Spectral energy fraction of the trace outside the space-like cone
/// {|eta| <= |tau| <= B/M} dilated by 10%. A Tukey taper is applied to the
/// late-time and lateral ends before the transform.
double cone_check(const BoundaryTrace& trace, double B, double M);

/// Semiclassical spectrum of the tapered trace (for frequency read-offs).
Spectrum2D trace_spectrum(const BoundaryTrace& trace);

/// (dt, dy) = 0.9 * pi * h * M with M = 1/c_max.
std::pair<double, double> boundary_sampling_plan(double B, const SpeedField& speed, double h);

/// Exit data of the unit-speed-normalized bicharacteristic from (x0, xi0).
struct RayExit {
    double s_plus = 0.0;  // exit time
    Vec2 y;               // exit point on the boundary
    double eta = 0.0;     // tangential momentum at exit
    double tau = 0.0;     // -|xi|_g, conserved
    Vec2 xi_exit;
};

/// Integrates xdot = c xi/|xi|, xidot = -|xi| grad c (Hamiltonian c(x)|xi|)
/// until the ray leaves the rectangular domain; the crossing is refined by
/// bisection to 1e-10. Rays exceeding the time cap raise an error.
RayExit trace_ray(Vec2 x0, Vec2 xi0, const SpeedField& speed, Rect domain);

}  // namespace mt
