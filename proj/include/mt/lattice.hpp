#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mt/grid.hpp"

namespace mt {

/// Periodic sampling lattice: points are offset + s*h*W*k for k in Z^2.
struct Lattice2D {
    Mat2 W;
    double s = 1.0;
    double h = 1.0;
    Vec2 offset;

    Vec2 point(int k1, int k2) const {
        return offset + (W * Vec2{static_cast<double>(k1), static_cast<double>(k2)}) * (s * h);
    }
};

/// Interpolation window; kernel arguments are in the normalized units of the
/// lattice (nodes at integer multiples of pi).
struct WindowSpec {
    enum class Kind { sinc, trapezoid, lanczos, tabulated };

    Kind kind = Kind::trapezoid;
    double delta = 0.8;        // trapezoid plateau fraction, in (0,1)
    int lanczos_a = 3;         // lanczos order
    std::vector<double> tab;   // tabulated chi_hat on [0,1], even extension
    Vec2 scale{1.0, 1.0};      // per-axis band scale B_j (used by filters)

    static WindowSpec sinc();
    static WindowSpec trapezoid(double delta);
    static WindowSpec lanczos(int a);
    static WindowSpec tabulated(std::vector<double> chi_hat_half);

    /// 1D interpolation kernel chi(u); u = pi * (lattice offset in steps).
    double kernel(double u) const;
    /// Normalized transfer function chi_hat(v)/pi on the scaled axis:
    /// 1 on the passband plateau, 0 outside |v| >= 1.
    double chi_hat(double v) const;
    /// Truncation radius in lattice steps for the reconstruction sum.
    int truncation_radius() const;
};

/// Values of a function on a finite set of lattice points.
struct SampleSet {
    Lattice2D lattice;
    std::vector<std::pair<int, int>> indices;
    std::vector<double> values;
};

/// Nyquist steps s_j = pi / B_j.
Vec2 nyquist_steps(Vec2 B);

/// W = 2*pi*(V^T)^{-1} for translation generators V (columns).
Lattice2D lattice_from_translations(const Mat2& V, double s, double h, Vec2 offset = {});

/// True iff the translates of the region under V*Z^2 (|k|_inf <= 3, k != 0)
/// have interiors disjoint from the region, tested on a dense membership grid.
bool tiling_disjoint(const FrequencyRegion& region, const Mat2& V, int probe = 400);

/// Samples a grid (bilinear) on the lattice points inside the domain.
SampleSet sample(const Grid2D& source, const Lattice2D& lattice, Rect domain);
/// Samples a closed-form function exactly.
SampleSet sample(const std::function<double(Vec2)>& f, const Lattice2D& lattice, Rect domain);

/// Windowed interpolation sum from samples onto the target grid geometry.
Grid2D reconstruct(const SampleSet& samples, const WindowSpec& window, const Grid2D& target);

/// |reference_norm^2 - |det W| (s h)^2 sum |f_k|^2| / reference_norm^2.
double parseval_residual(const SampleSet& samples, double reference_norm);

/// Folds the spectrum over the reciprocal lattice of axis rates (s_x, s_y)
/// and applies the window transfer function chi_hat(s xi / pi).
Spectrum2D fold_spectrum(const Spectrum2D& spec, Vec2 s, const WindowSpec& window);

/// The aliasing shift S_k on frequency space: xi -> xi + 2*pi*k/s.
Vec2 alias_shift(Vec2 xi, int k1, int k2, Vec2 s);

/// Phase-volume lower bound (2*pi*h)^{-2} * volume.
double weyl_count(double volume_phase, double h);

/// Exact number of lattice points inside the half-open rectangle.
long lattice_point_count(const Lattice2D& lattice, Rect domain);

}  // namespace mt
