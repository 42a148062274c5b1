#include "mt/radon_parallel.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>

namespace mt {

namespace {
std::mutex g_fftw_mutex;
}

Grid2D ParallelSinogram::as_grid() const {
    Grid2D g = make_grid({0.0, p_min}, {kTwoPi, p_max - p_min}, phi_count, p_count, h);
    g.values = values;
    return g;
}

ParallelSinogram make_parallel_sinogram(int phi_count, int p_count, double p_max, double R,
                                        double h) {
    if (phi_count < 2 || p_count < 2)
        throw std::invalid_argument("sinogram: need at least 2 nodes per axis");
    if (p_max <= 0.0 || R <= 0.0 || h <= 0.0)
        throw std::invalid_argument("sinogram: p_max, R, h must be positive");
    ParallelSinogram s;
    s.phi_count = phi_count;
    s.p_count = p_count;
    s.p_min = -p_max;
    s.p_max = p_max;
    s.R = R;
    s.h = h;
    s.values.assign(static_cast<std::size_t>(phi_count) * p_count, 0.0);
    return s;
}

ParallelSinogram forward(const Grid2D& f, const WeightFn& weight,
                         const ParallelSinogram& geometry) {
    ParallelSinogram out = geometry;
    out.weighted = !weight.is_unit;
    std::fill(out.values.begin(), out.values.end(), 0.0);
    if (out.p_max < out.R)
        std::fprintf(stderr, "forward: p_max %.3g < support radius %.3g, lines missed\n",
                     out.p_max, out.R);
    const double step0 = 0.5 * std::min(f.dx(), f.dy());
    for (int i = 0; i < out.phi_count; ++i) {
        Vec2 w = omega(out.phi(i));
        Vec2 wp = w.perp();
        for (int j = 0; j < out.p_count; ++j) {
            double p = out.p(j);
            double L2 = out.R * out.R - p * p;
            if (L2 <= 0.0) continue;
            double L = std::sqrt(L2);
            int n = std::max(2, static_cast<int>(std::ceil(2.0 * L / step0)));
            double dt = 2.0 * L / n;
            double acc = 0.0;
            for (int m = 0; m <= n; ++m) {
                double t = -L + m * dt;
                Vec2 x{p * w.x + t * wp.x, p * w.y + t * wp.y};
                double v = f.interp(x) * weight(x, w);
                acc += (m == 0 || m == n) ? 0.5 * v : v;
            }
            out.at(i, j) = acc * dt;
        }
    }
    return out;
}

ParallelCotangent canonical_forward(Vec2 x, Vec2 xi, int sign) {
    if (xi.norm() == 0.0) throw std::invalid_argument("canonical_forward: xi = 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("canonical_forward: sign must be +-1");
    double s = static_cast<double>(sign);
    ParallelCotangent q;
    q.phi = wrap_angle(std::atan2(s * xi.y, s * xi.x));
    q.p = s * dot(x, xi) / xi.norm();
    q.phi_hat = -dot(x, xi.perp());
    q.p_hat = s * xi.norm();
    return q;
}

std::pair<Vec2, Vec2> canonical_inverse(const ParallelCotangent& q) {
    if (q.p_hat == 0.0) throw std::invalid_argument("canonical_inverse: p_hat = 0 is singular");
    Vec2 w = omega(q.phi);
    Vec2 wp = w.perp();
    double c = q.phi_hat / q.p_hat;
    Vec2 x{q.p * w.x - c * wp.x, q.p * w.y - c * wp.y};
    Vec2 xi{q.p_hat * w.x, q.p_hat * w.y};
    return {x, xi};
}

std::pair<double, double> nyquist_rates(double R, double B) {
    if (R <= 0.0 || B <= 0.0) throw std::invalid_argument("nyquist_rates: R, B must be positive");
    return {kPi / (R * B), kPi / B};
}

FrequencyRegion local_triangle(double p, double R, double B) {
    if (std::abs(p) > R) throw std::invalid_argument("local_triangle: |p| > R");
    double slope = std::sqrt(std::max(R * R - p * p, 0.0));
    Rect bb{{-slope * B, -B}, {slope * B, B}};
    return FrequencyRegion::custom(
        [slope, B](Vec2 xi) {
            return std::abs(xi.x) <= slope * std::abs(xi.y) && std::abs(xi.y) <= B;
        },
        bb);
}

std::vector<StripPlan> strip_sampling_plan(double R, double B, int k, double h) {
    if (k < 1) throw std::invalid_argument("strip_sampling_plan: k >= 1");
    if (R <= 0.0 || B <= 0.0 || h <= 0.0)
        throw std::invalid_argument("strip_sampling_plan: R, B, h must be positive");
    std::vector<StripPlan> plan;
    // Strips ordered from -R to R; each uses the largest cone slope over the
    // strip, attained at the edge nearest p = 0.
    for (int j = k; j >= 1; --j) {
        StripPlan s;
        s.p_lo = -static_cast<double>(j) * R / k;
        s.p_hi = -static_cast<double>(j - 1) * R / k;
        double inner = std::abs(s.p_hi);
        double slope = std::sqrt(std::max(R * R - inner * inner, 0.0));
        Mat2 V = Mat2::from_columns({slope * B, B}, {0.0, 2.0 * B});
        s.lattice = lattice_from_translations(V, 1.0, h);
        plan.push_back(s);
    }
    for (int j = 1; j <= k; ++j) {
        StripPlan s;
        s.p_lo = static_cast<double>(j - 1) * R / k;
        s.p_hi = static_cast<double>(j) * R / k;
        double slope = std::sqrt(std::max(R * R - s.p_lo * s.p_lo, 0.0));
        Mat2 V = Mat2::from_columns({slope * B, B}, {0.0, 2.0 * B});
        s.lattice = lattice_from_translations(V, 1.0, h);
        plan.push_back(s);
    }
    return plan;
}

long plan_point_count(const std::vector<StripPlan>& plan) {
    long total = 0;
    for (const auto& s : plan)
        total += lattice_point_count(s.lattice, Rect{{0.0, s.p_lo}, {kTwoPi, s.p_hi}});
    return total;
}

double resolution_limit(Vec2 x, double s_phi, double s_p, double theta) {
    Vec2 th = omega(theta);
    double cross = std::abs(dot(x, th.perp()));
    double bound = kPi / s_p;
    if (cross > 0.0) bound = std::min(bound, kPi / (s_phi * cross));
    return bound;
}

std::vector<PhaseSpacePoint> alias_artifact_predict(Vec2 x, Vec2 xi, double s_phi, double s_p,
                                                    int k, AliasKind which) {
    if (xi.norm() == 0.0) throw std::invalid_argument("alias_artifact_predict: xi = 0");
    std::vector<PhaseSpacePoint> out;
    for (int sign : {+1, -1}) {
        ParallelCotangent q = canonical_forward(x, xi, sign);
        if (which == AliasKind::angular) {
            double shifted = q.phi_hat + kTwoPi * k / s_phi;
            if (std::abs(shifted) > kPi / s_phi) continue;
            q.phi_hat = shifted;
        } else {
            double shifted = q.p_hat + kTwoPi * k / s_p;
            if (std::abs(shifted) > kPi / s_p || shifted == 0.0) continue;
            q.p_hat = shifted;
        }
        auto [xs, xis] = canonical_inverse(q);
        out.push_back({xs, xis, sign});
    }
    return out;
}

Grid2D fbp_invert(const ParallelSinogram& sino, const WindowSpec& window, const Grid2D& target) {
    if (sino.weighted)
        throw std::invalid_argument("fbp_invert: weighted sinograms are not invertible here");
    const int n = sino.p_count;
    const double dp = sino.dp();

    // Per-angle ramp filtering by linear convolution with the band-limited
    // ramp kernel on a zero-padded row. Sampling |sigma| directly on the
    // unpadded DFT grid biases the low frequencies and shows up as a constant
    // offset in the image; the spatial kernel avoids that. The kernel at
    // offset j is pi/(2 dp^2) for j = 0, 0 for even j, -2/(pi j^2 dp^2) odd.
    const int m = 4 * n;
    std::vector<std::vector<double>> q(sino.phi_count, std::vector<double>(n));
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_complex* buf = fftw_alloc_complex(m);
        fftw_plan fwd = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_plan bwd = fftw_plan_dft_1d(m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        for (int j = 0; j < m; ++j) {
            int jj = (j <= m / 2) ? j : j - m;
            double k = 0.0;
            if (jj == 0)
                k = kPi / (2.0 * dp * dp);
            else if (jj % 2 != 0)
                k = -2.0 / (kPi * jj * jj * dp * dp);
            buf[j][0] = k;
            buf[j][1] = 0.0;
        }
        fftw_execute(fwd);
        std::vector<double> filt(m);
        const double sigma_nyq = kPi / dp;
        for (int mm = 0; mm < m; ++mm) {
            int sm = (mm <= m / 2) ? mm : mm - m;
            double sigma = kTwoPi * sm / (m * dp);
            // Apodization relative to the plain ramp.
            filt[mm] = buf[mm][0] * dp * window.chi_hat(sigma / sigma_nyq);
        }
        for (int i = 0; i < sino.phi_count; ++i) {
            for (int j = 0; j < n; ++j) {
                buf[j][0] = sino.at(i, j);
                buf[j][1] = 0.0;
            }
            for (int j = n; j < m; ++j) buf[j][0] = buf[j][1] = 0.0;
            fftw_execute(fwd);
            for (int mm = 0; mm < m; ++mm) {
                buf[mm][0] *= filt[mm];
                buf[mm][1] *= filt[mm];
            }
            fftw_execute(bwd);
            for (int j = 0; j < n; ++j) q[i][j] = buf[j][0] / m;
        }
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }

    // Back-projection: f(x) = (1/(4 pi)) sum_phi q_phi(x . omega) dphi.
    Grid2D out = make_grid(target.origin, target.extent, target.nx, target.ny, target.h);
    const double scale = sino.dphi() / (4.0 * kPi);
    std::vector<Vec2> omegas(sino.phi_count);
    for (int i = 0; i < sino.phi_count; ++i) omegas[i] = omega(sino.phi(i));
    for (int ix = 0; ix < out.nx; ++ix) {
        for (int iy = 0; iy < out.ny; ++iy) {
            Vec2 x = out.point(ix, iy);
            double acc = 0.0;
            for (int i = 0; i < sino.phi_count; ++i) {
                double s = (dot(x, omegas[i]) - sino.p_min) / dp;
                if (s < 0.0 || s > n - 1) continue;
                int j0 = std::min(static_cast<int>(s), n - 2);
                double f = s - j0;
                acc += (1.0 - f) * q[i][j0] + f * q[i][j0 + 1];
            }
            out.at(ix, iy) = acc * scale;
        }
    }
    return out;
}

std::function<double(Vec2, Vec2)> averaged_symbol(double a, double b,
                                                  std::function<double(double)> psi) {
    return [a, b, psi = std::move(psi)](Vec2 x, Vec2 xi) {
        double c = dot(x, xi.perp());
        return psi(a * dot(xi, xi) + b * c * c);
    };
}

std::vector<double> resample_lanczos3(const std::vector<double>& src,
                                      const std::vector<double>& positions) {
    const int n = static_cast<int>(src.size());
    auto lanc = [](double t) {
        if (std::abs(t) >= 3.0) return 0.0;
        if (std::abs(t) < 1e-8) return 1.0;
        double a = kPi * t;
        return std::sin(a) / a * std::sin(a / 3.0) / (a / 3.0);
    };
    std::vector<double> out(positions.size(), 0.0);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        double y = positions[i];
        if (y < -3.0 || y > n + 2.0) continue;
        int lo = std::max(0, static_cast<int>(std::ceil(y)) - 3);
        int hi = std::min(n - 1, static_cast<int>(std::floor(y)) + 3);
        double acc = 0.0, wsum = 0.0;
        for (int j = lo; j <= hi; ++j) {
            double w = lanc(y - j);
            acc += w * src[j];
            wsum += w;
        }
        if (wsum != 0.0) out[i] = acc / wsum;
    }
    return out;
}

}  // namespace mt
