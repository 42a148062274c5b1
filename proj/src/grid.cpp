#include "mt/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "mt/kernels.hpp"

namespace mt {

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

void run_dft_2d(std::vector<std::complex<double>>& data, int nx, int ny, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_2d(nx, ny, reinterpret_cast<fftw_complex*>(data.data()),
                                reinterpret_cast<fftw_complex*>(data.data()), sign,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace

double Grid2D::interp(Vec2 p) const {
    double u = (p.x - origin.x) / dx();
    double v = (p.y - origin.y) / dy();
    if (u < 0.0 || v < 0.0 || u > nx - 1 || v > ny - 1) return 0.0;
    int i0 = std::min(static_cast<int>(u), nx - 2);
    int j0 = std::min(static_cast<int>(v), ny - 2);
    if (nx == 1 || ny == 1) return 0.0;
    double fu = u - i0;
    double fv = v - j0;
    return (1 - fu) * (1 - fv) * at(i0, j0) + fu * (1 - fv) * at(i0 + 1, j0) +
           (1 - fu) * fv * at(i0, j0 + 1) + fu * fv * at(i0 + 1, j0 + 1);
}

double Grid2D::l2_norm() const {
    double s = kernels::sum_sq(values.size(), values.data());
    return std::sqrt(s * dx() * dy());
}

Grid2D make_grid(Vec2 origin, Vec2 extent, int nx, int ny, double h) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("make_grid: need at least 2 nodes per axis");
    if (extent.x <= 0.0 || extent.y <= 0.0)
        throw std::invalid_argument("make_grid: extent must be positive");
    if (h <= 0.0) throw std::invalid_argument("make_grid: h must be positive");
    Grid2D g;
    g.origin = origin;
    g.extent = extent;
    g.nx = nx;
    g.ny = ny;
    g.h = h;
    g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    return g;
}

double Spectrum2D::total_energy() const {
    // (2 pi h)^{-2} sum |c|^2 dxi_x dxi_y, which reduces to sum / (Lx Ly).
    return kernels::sum_sq_cplx(coefficients.size(), coefficients.data()) /
           (grid_extent.x * grid_extent.y);
}

Spectrum2D sc_fourier(const Grid2D& grid) {
    const int nx = grid.nx, ny = grid.ny;
    std::vector<std::complex<double>> data(grid.values.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = grid.values[i];
    run_dft_2d(data, nx, ny, FFTW_FORWARD);

    Spectrum2D spec;
    spec.nx = nx;
    spec.ny = ny;
    spec.h = grid.h;
    spec.grid_origin = grid.origin;
    spec.grid_extent = grid.extent;
    spec.xi_step = {kTwoPi * grid.h / grid.extent.x, kTwoPi * grid.h / grid.extent.y};
    spec.coefficients.resize(data.size());

    const double cell = grid.dx() * grid.dy();
    for (int i = 0; i < nx; ++i) {
        int kx = i - nx / 2;
        int ix = (kx % nx + nx) % nx;
        for (int j = 0; j < ny; ++j) {
            int ky = j - ny / 2;
            int iy = (ky % ny + ny) % ny;
            // Continuum transform of the node set: cell measure plus the
            // phase carrying the grid origin.
            double ph = -kTwoPi * (kx * grid.origin.x / grid.extent.x +
                                   ky * grid.origin.y / grid.extent.y);
            spec.at(i, j) = data[static_cast<std::size_t>(ix) * ny + iy] * cell *
                            std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    return spec;
}

Grid2D inverse_sc_fourier(const Spectrum2D& spec) {
    const int nx = spec.nx, ny = spec.ny;
    std::vector<std::complex<double>> data(spec.coefficients.size());
    for (int i = 0; i < nx; ++i) {
        int kx = i - nx / 2;
        int ix = (kx % nx + nx) % nx;
        for (int j = 0; j < ny; ++j) {
            int ky = j - ny / 2;
            int iy = (ky % ny + ny) % ny;
            double ph = kTwoPi * (kx * spec.grid_origin.x / spec.grid_extent.x +
                                  ky * spec.grid_origin.y / spec.grid_extent.y);
            data[static_cast<std::size_t>(ix) * ny + iy] =
                spec.at(i, j) * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    run_dft_2d(data, nx, ny, FFTW_BACKWARD);

    Grid2D g = make_grid(spec.grid_origin, spec.grid_extent, nx, ny, spec.h);
    const double cell = g.dx() * g.dy();
    const double scale = 1.0 / (cell * nx * ny);
    for (std::size_t i = 0; i < data.size(); ++i) g.values[i] = data[i].real() * scale;
    return g;
}

// ---------------------------------------------------------------------------
// FrequencyRegion

FrequencyRegion FrequencyRegion::box(Vec2 half_sides) {
    Rect bb{{-half_sides.x, -half_sides.y}, {half_sides.x, half_sides.y}};
    return FrequencyRegion(
        Kind::box,
        [half_sides](Vec2 xi) {
            return std::abs(xi.x) <= half_sides.x && std::abs(xi.y) <= half_sides.y;
        },
        bb);
}

FrequencyRegion FrequencyRegion::disk(double radius) {
    Rect bb{{-radius, -radius}, {radius, radius}};
    return FrequencyRegion(
        Kind::disk, [radius](Vec2 xi) { return xi.norm2() <= radius * radius; }, bb);
}

FrequencyRegion FrequencyRegion::cone_parallel(double R, double B) {
    Rect bb{{-R * B, -B}, {R * B, B}};
    return FrequencyRegion(
        Kind::cone_parallel,
        [R, B](Vec2 xi) { return std::abs(xi.x) <= R * std::abs(xi.y) && std::abs(xi.y) <= B; },
        bb);
}

FrequencyRegion FrequencyRegion::double_triangle_fan(double R, double B, double beta) {
    double top = R * B * std::cos(beta);
    Rect bb{{-top, -2 * top}, {top, 2 * top}};
    return FrequencyRegion(
        Kind::double_triangle_fan,
        [top](Vec2 ab) {
            double bp = ab.y - ab.x;  // beta_hat' = beta_hat - alpha_hat
            return std::abs(ab.x) <= std::abs(bp) && std::abs(bp) <= top;
        },
        bb);
}

FrequencyRegion FrequencyRegion::halfplane_shift(Vec2 normal, double offset) {
    return FrequencyRegion(
        Kind::halfplane_shift,
        [normal, offset](Vec2 xi) { return xi.dot(normal) >= offset; }, std::nullopt);
}

FrequencyRegion FrequencyRegion::custom(std::function<bool(Vec2)> indicator,
                                        std::optional<Rect> bounding) {
    return FrequencyRegion(Kind::custom, std::move(indicator), bounding);
}

Rect FrequencyRegion::bounding_box() const {
    if (!bbox_) throw std::invalid_argument("FrequencyRegion: region is unbounded");
    return *bbox_;
}

FrequencyRegion FrequencyRegion::translated(Vec2 t) const {
    auto ind = indicator_;
    std::optional<Rect> bb;
    if (bbox_) bb = Rect{bbox_->lo + t, bbox_->hi + t};
    return FrequencyRegion(
        Kind::custom, [ind, t](Vec2 xi) { return ind(xi - t); }, bb);
}

// ---------------------------------------------------------------------------
// Phantoms

PhantomSpec PhantomSpec::coherent(Vec2 x0, Vec2 xi0, double support_radius) {
    PhantomSpec s;
    s.kind = Kind::coherent_state;
    s.center = x0;
    s.xi0 = xi0;
    s.support_radius = support_radius;
    if (x0.norm() >= support_radius)
        throw std::invalid_argument("phantom center outside support disk");
    return s;
}

PhantomSpec PhantomSpec::gaussians(std::vector<Vec2> centers, std::vector<double> widths,
                                   std::vector<double> amplitudes, double support_radius) {
    if (centers.size() != widths.size() || centers.size() != amplitudes.size())
        throw std::invalid_argument("gaussians: mismatched component counts");
    for (const auto& c : centers)
        if (c.norm() >= support_radius)
            throw std::invalid_argument("phantom center outside support disk");
    PhantomSpec s;
    s.kind = Kind::gaussian_sum;
    s.centers = std::move(centers);
    s.widths = std::move(widths);
    s.amplitudes = std::move(amplitudes);
    s.support_radius = support_radius;
    return s;
}

PhantomSpec PhantomSpec::oscillatory(Vec2 center, Vec2 direction, double wavelength,
                                     double support_radius) {
    PhantomSpec s;
    s.kind = Kind::oscillatory_gaussian;
    s.center = center;
    s.direction = direction;
    s.wavelength = wavelength;
    s.support_radius = support_radius;
    return s;
}

PhantomSpec PhantomSpec::doughnuts(int rows, int cols, double ring_radius,
                                   double support_radius) {
    PhantomSpec s;
    s.kind = Kind::doughnut_array;
    s.rows = rows;
    s.cols = cols;
    s.ring_radius = ring_radius;
    s.support_radius = support_radius;
    return s;
}

double PhantomSpec::evaluate(Vec2 x, double h) const {
    switch (kind) {
        case Kind::coherent_state: {
            Vec2 d = x - center;
            return std::cos(x.dot(xi0) / h) * std::exp(-d.norm2() / (2.0 * h));
        }
        case Kind::gaussian_sum: {
            double v = 0.0;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                Vec2 d = x - centers[i];
                double w2 = widths[i] * widths[i];
                v += amplitudes[i] * std::exp(-d.norm2() / (2.0 * w2));
            }
            return v;
        }
        case Kind::oscillatory_gaussian:
            return std::exp(-2.0 * x.norm2()) *
                   std::sin((x - center).dot(direction) / wavelength);
        case Kind::doughnut_array: {
            // rows x cols ring bumps spread over the central 70% of the disk.
            double half = 0.7 * support_radius;
            double w = ring_radius / 3.0;
            double v = 0.0;
            for (int r = 0; r < rows; ++r) {
                for (int c = 0; c < cols; ++c) {
                    double cx = rows > 1 ? -half + 2.0 * half * r / (rows - 1) : 0.0;
                    double cy = cols > 1 ? -half + 2.0 * half * c / (cols - 1) : 0.0;
                    double dist = (x - Vec2{cx, cy}).norm();
                    double dr = dist - ring_radius;
                    v += std::exp(-dr * dr / (2.0 * w * w));
                }
            }
            return v;
        }
    }
    return 0.0;
}

double boundary_mass_fraction(const Grid2D& grid, int margin_cells) {
    double total = 0.0, boundary = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        bool edge_x = i < margin_cells || i >= grid.nx - margin_cells;
        for (int j = 0; j < grid.ny; ++j) {
            double a = std::abs(grid.at(i, j));
            total += a;
            if (edge_x || j < margin_cells || j >= grid.ny - margin_cells) boundary += a;
        }
    }
    return total > 0.0 ? boundary / total : 0.0;
}

Grid2D render_phantom(const PhantomSpec& spec, const Grid2D& geometry) {
    Grid2D g = make_grid(geometry.origin, geometry.extent, geometry.nx, geometry.ny, geometry.h);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) g.at(i, j) = spec.evaluate(g.point(i, j), g.h);
    double bf = boundary_mass_fraction(g);
    if (bf > 1e-9)
        std::cerr << "render_phantom: warning: boundary mass fraction " << bf
                  << " exceeds 1e-9; periodic transforms may alias\n";
    return g;
}

// ---------------------------------------------------------------------------
// Frequency-set diagnostics

FrequencyRegion frequency_set_estimate(const Spectrum2D& spec, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::invalid_argument("frequency_set_estimate: threshold must be in (0,1)");
    double max_mod = 0.0;
    for (const auto& c : spec.coefficients) max_mod = std::max(max_mod, std::abs(c));
    double cut = threshold * max_mod;

    // Collect flagged nodes into a membership set over node indices.
    auto nodes = std::make_shared<std::vector<char>>(spec.coefficients.size(), 0);
    Rect bb{{0, 0}, {0, 0}};
    bool any = false;
    for (int i = 0; i < spec.nx; ++i) {
        for (int j = 0; j < spec.ny; ++j) {
            if (max_mod > 0.0 && std::abs(spec.at(i, j)) > cut) {
                (*nodes)[static_cast<std::size_t>(i) * spec.ny + j] = 1;
                Vec2 xi = spec.xi(i, j);
                if (!any) {
                    bb = Rect{xi, xi};
                    any = true;
                } else {
                    bb.lo.x = std::min(bb.lo.x, xi.x);
                    bb.lo.y = std::min(bb.lo.y, xi.y);
                    bb.hi.x = std::max(bb.hi.x, xi.x);
                    bb.hi.y = std::max(bb.hi.y, xi.y);
                }
            }
        }
    }
    // Half-open bbox padding by one step so member nodes are inside.
    bb.hi.x += spec.xi_step.x;
    bb.hi.y += spec.xi_step.y;

    int nx = spec.nx, ny = spec.ny;
    Vec2 step = spec.xi_step;
    auto ind = [nodes, nx, ny, step](Vec2 xi) {
        int i = static_cast<int>(std::lround(xi.x / step.x)) + nx / 2;
        int j = static_cast<int>(std::lround(xi.y / step.y)) + ny / 2;
        if (i < 0 || i >= nx || j < 0 || j >= ny) return false;
        return (*nodes)[static_cast<std::size_t>(i) * ny + j] != 0;
    };
    return FrequencyRegion::custom(ind, any ? std::optional<Rect>(bb) : std::optional<Rect>());
}

double energy_fraction_outside(const Spectrum2D& spec, const FrequencyRegion& region) {
    double total = 0.0, outside = 0.0;
    for (int i = 0; i < spec.nx; ++i) {
        for (int j = 0; j < spec.ny; ++j) {
            double e = std::norm(spec.at(i, j));
            total += e;
            if (!region.contains(spec.xi(i, j))) outside += e;
        }
    }
    return total > 0.0 ? outside / total : 0.0;
}

double max_frequency(const Spectrum2D& spec, double threshold) {
    double max_mod = 0.0;
    for (const auto& c : spec.coefficients) max_mod = std::max(max_mod, std::abs(c));
    if (max_mod == 0.0) return 0.0;
    double cut = threshold * max_mod;
    double best = 0.0;
    for (int i = 0; i < spec.nx; ++i)
        for (int j = 0; j < spec.ny; ++j)
            if (std::abs(spec.at(i, j)) >= cut) best = std::max(best, spec.xi(i, j).norm());
    return best;
}

Grid2D envelope(const Grid2D& grid, Vec2 direction) {
    if (direction.norm() == 0.0) throw std::invalid_argument("envelope: zero direction");
    Spectrum2D spec = sc_fourier(grid);
    for (int i = 0; i < spec.nx; ++i) {
        for (int j = 0; j < spec.ny; ++j) {
            double s = dot(spec.xi(i, j), direction);
            // Multiplier -i sign(s): quadrature component of the signal.
            std::complex<double> m = s > 0.0   ? std::complex<double>(0.0, -1.0)
                                    : s < 0.0 ? std::complex<double>(0.0, 1.0)
                                              : std::complex<double>(0.0, 0.0);
            spec.at(i, j) *= m;
        }
    }
    Grid2D hf = inverse_sc_fourier(spec);
    Grid2D out = grid;
    for (std::size_t m = 0; m < out.values.size(); ++m)
        out.values[m] = std::hypot(grid.values[m], hf.values[m]);
    return out;
}

Vec2 intensity_centroid(const Grid2D& grid) {
    double wsum = 0.0, sx = 0.0, sy = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            double w = std::abs(grid.at(i, j));
            Vec2 p = grid.point(i, j);
            wsum += w;
            sx += w * p.x;
            sy += w * p.y;
        }
    }
    if (wsum == 0.0) return grid.origin;
    return {sx / wsum, sy / wsum};
}

}  // namespace mt
