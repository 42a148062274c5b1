#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "mt/core.hpp"

namespace mt {

/// Real-valued samples of a function on a uniform rectangular grid together
/// with the semiclassical parameter h. Node (i, j) sits at
/// origin + (i*dx, j*dy); the grid is treated as periodic with period
/// `extent` by the discrete transforms.
struct Grid2D {
    Vec2 origin;
    Vec2 extent;
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    std::vector<double> values;  // row-major: values[i * ny + j]

    double dx() const { return extent.x / nx; }
    double dy() const { return extent.y / ny; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
    Vec2 point(int i, int j) const { return {origin.x + i * dx(), origin.y + j * dy()}; }

    /// Bilinear interpolation; points outside the grid evaluate to 0.
    double interp(Vec2 p) const;

    /// L2 norm with the cell measure: sqrt(sum v^2 * dx * dy).
    double l2_norm() const;
};

Grid2D make_grid(Vec2 origin, Vec2 extent, int nx, int ny, double h);

/// Discrete semiclassical Fourier transform of a Grid2D. Coefficients are
/// stored with signed frequencies in increasing order on both axes; node
/// (i, j) has frequency ((i - nx/2) * xi_step.x, (j - ny/2) * xi_step.y)
/// where xi_step = 2*pi*h / extent.
struct Spectrum2D {
    Vec2 xi_step;
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    Vec2 grid_origin;  // kept so the inverse transform can restore geometry
    Vec2 grid_extent;
    std::vector<std::complex<double>> coefficients;  // row-major as Grid2D

    std::complex<double>& at(int i, int j) {
        return coefficients[static_cast<std::size_t>(i) * ny + j];
    }
    std::complex<double> at(int i, int j) const {
        return coefficients[static_cast<std::size_t>(i) * ny + j];
    }
    /// Frequency of node (i, j) in semiclassical units.
    Vec2 xi(int i, int j) const {
        return {(i - nx / 2) * xi_step.x, (j - ny / 2) * xi_step.y};
    }
    double total_energy() const;
};

Spectrum2D sc_fourier(const Grid2D& grid);
Grid2D inverse_sc_fourier(const Spectrum2D& spec);

/// A region of the frequency plane with a total membership test.
class FrequencyRegion {
  public:
    enum class Kind { box, disk, cone_parallel, double_triangle_fan, halfplane_shift, custom };

    static FrequencyRegion box(Vec2 half_sides);
    static FrequencyRegion disk(double radius);
    /// { (phi_hat, p_hat) : |phi_hat| <= R |p_hat|, |p_hat| <= B }.
    static FrequencyRegion cone_parallel(double R, double B);
    /// Sheared fan range triangle in (alpha_hat, beta_hat):
    /// |alpha_hat| <= |beta_hat - alpha_hat| <= R B cos(beta).
    static FrequencyRegion double_triangle_fan(double R, double B, double beta);
    /// { xi : xi . normal >= offset }.
    static FrequencyRegion halfplane_shift(Vec2 normal, double offset);
    static FrequencyRegion custom(std::function<bool(Vec2)> indicator,
                                  std::optional<Rect> bounding = std::nullopt);

    bool contains(Vec2 xi) const { return indicator_(xi); }
    Kind kind() const { return kind_; }
    bool bounded() const { return bbox_.has_value(); }
    /// Bounding rectangle; throws for unbounded regions.
    Rect bounding_box() const;
    /// The region translated by t.
    FrequencyRegion translated(Vec2 t) const;

  private:
    FrequencyRegion(Kind k, std::function<bool(Vec2)> ind, std::optional<Rect> bb)
        : kind_(k), indicator_(std::move(ind)), bbox_(bb) {}
    Kind kind_;
    std::function<bool(Vec2)> indicator_;
    std::optional<Rect> bbox_;
};

/// Closed-form phantom families used by the experiments.
struct PhantomSpec {
    enum class Kind { coherent_state, gaussian_sum, oscillatory_gaussian, doughnut_array };

    Kind kind = Kind::coherent_state;
    double support_radius = 1.0;

    // coherent_state: Re exp(i x.xi0/h - |x-x0|^2/(2h))
    Vec2 center;     // x0
    Vec2 xi0;        // frequency at scale 1/h

    // gaussian_sum: sum_i amp[i] * exp(-|x-c[i]|^2 / (2 w[i]^2))
    std::vector<Vec2> centers;
    std::vector<double> widths;
    std::vector<double> amplitudes;

    // oscillatory_gaussian: exp(-2|x|^2) * sin((x - center).direction / wavelength)
    Vec2 direction{1.0, 0.0};
    double wavelength = 0.02;

    // doughnut_array: rows x cols ring bumps of the given ring radius
    int rows = 1;
    int cols = 1;
    double ring_radius = 0.05;

    static PhantomSpec coherent(Vec2 x0, Vec2 xi0, double support_radius = 1.0);
    static PhantomSpec gaussians(std::vector<Vec2> centers, std::vector<double> widths,
                                 std::vector<double> amplitudes, double support_radius = 1.0);
    static PhantomSpec oscillatory(Vec2 center, Vec2 direction, double wavelength,
                                   double support_radius = 1.0);
    static PhantomSpec doughnuts(int rows, int cols, double ring_radius,
                                 double support_radius = 1.0);

    /// Closed-form evaluation at a point.
    double evaluate(Vec2 x, double h) const;
};

/// Renders the phantom onto the grid geometry. Warns on stderr when the mass
/// within 3 grid spacings of the boundary exceeds 1e-9 of the total.
Grid2D render_phantom(const PhantomSpec& spec, const Grid2D& geometry);

/// Fraction of |values| mass within `margin_cells` spacings of the boundary.
double boundary_mass_fraction(const Grid2D& grid, int margin_cells = 3);

/// Indicator of spectrum nodes with modulus above threshold * max modulus.
FrequencyRegion frequency_set_estimate(const Spectrum2D& spec, double threshold);

/// Energy fraction of the spectrum outside the region; 0 for a zero spectrum.
double energy_fraction_outside(const Spectrum2D& spec, const FrequencyRegion& region);

/// Largest |xi| over nodes with modulus above threshold * max modulus;
/// 0 for a zero spectrum.
double max_frequency(const Spectrum2D& spec, double threshold = 1e-2);

/// Oscillation envelope sqrt(f^2 + (Hf)^2) where H is the Hilbert transform
/// along the given direction (sign of xi . direction in frequency).
Grid2D envelope(const Grid2D& grid, Vec2 direction);

/// Centroid of |values| weighted by magnitude; grid origin for a zero grid.
Vec2 intensity_centroid(const Grid2D& grid);

}  // namespace mt
