#include "mt/radon_fanbeam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mt {

Grid2D FanSinogram::as_grid() const {
    Grid2D g = make_grid({0.0, -kPi / 2.0}, {kTwoPi, kPi}, alpha_count, beta_count, h);
    g.values = values;
    return g;
}

FanSinogram make_fan_sinogram(int alpha_count, int beta_count, double R, double h) {
    if (alpha_count < 2 || beta_count < 2)
        throw std::invalid_argument("fan sinogram: need at least 2 nodes per axis");
    if (R <= 0.0 || h <= 0.0) throw std::invalid_argument("fan sinogram: R, h must be positive");
    FanSinogram s;
    s.alpha_count = alpha_count;
    s.beta_count = beta_count;
    s.R = R;
    s.h = h;
    s.values.assign(static_cast<std::size_t>(alpha_count) * beta_count, 0.0);
    return s;
}

std::pair<double, double> fan_to_parallel(double alpha, double beta, double R) {
    if (std::abs(beta) > kPi / 2.0 + 1e-12)
        throw std::invalid_argument("fan_to_parallel: beta outside [-pi/2, pi/2]");
    return {wrap_angle(alpha + beta - kPi / 2.0), R * std::sin(beta)};
}

std::pair<double, double> parallel_to_fan(double phi, double p, double R) {
    if (std::abs(p) > R) throw std::invalid_argument("parallel_to_fan: |p| > R");
    double beta = std::asin(p / R);
    return {wrap_angle(phi - beta + kPi / 2.0), beta};
}

FanCotangent fan_symmetry(const FanCotangent& q) {
    return {wrap_angle(q.alpha + 2.0 * q.beta - kPi), -q.beta, q.alpha_hat,
            2.0 * q.alpha_hat - q.beta_hat};
}

FanCotangent canonical_forward_fan(Vec2 x, Vec2 xi, double R, int sign) {
    double r = xi.norm();
    if (r == 0.0) throw std::invalid_argument("canonical_forward_fan: xi = 0");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("canonical_forward_fan: sign must be +-1");
    double t = dot(x, xi) / (R * r);
    if (std::abs(t) > 1.0) {
        if (std::abs(t) > 1.0 + 1e-12)
            throw std::invalid_argument("canonical_forward_fan: point outside the source circle");
        t = std::clamp(t, -1.0, 1.0);
    }
    double s = static_cast<double>(sign);
    FanCotangent q;
    q.beta = s * std::asin(t);
    q.alpha = wrap_angle(std::atan2(xi.y, xi.x) - q.beta + s * kPi / 2.0);
    q.alpha_hat = -dot(x, xi.perp());
    double proj = dot(x, xi) / r;
    q.beta_hat = s * r * std::sqrt(std::max(R * R - proj * proj, 0.0)) + q.alpha_hat;
    return q;
}

std::pair<Vec2, Vec2> canonical_inverse_fan(const FanCotangent& q, double R) {
    if (q.beta_hat == q.alpha_hat)
        throw std::invalid_argument("canonical_inverse_fan: beta_hat = alpha_hat is singular");
    double cb = std::cos(q.beta);
    if (cb <= 0.0) throw std::invalid_argument("canonical_inverse_fan: |beta| >= pi/2");
    Vec2 w_phi = omega(q.alpha + q.beta - kPi / 2.0);
    Vec2 w_ab = omega(q.alpha + q.beta);
    double c = q.alpha_hat / (q.beta_hat - q.alpha_hat);
    Vec2 x{R * std::sin(q.beta) * w_phi.x - c * R * cb * w_ab.x,
           R * std::sin(q.beta) * w_phi.y - c * R * cb * w_ab.y};
    double m = (q.beta_hat - q.alpha_hat) / (R * cb);
    return {x, Vec2{m * w_phi.x, m * w_phi.y}};
}

std::pair<double, double> nyquist_rates_fan(double R, double B) {
    if (R <= 0.0 || B <= 0.0)
        throw std::invalid_argument("nyquist_rates_fan: R, B must be positive");
    return {kPi / (R * B), kPi / (2.0 * R * B)};
}

Lattice2D fan_efficient_lattice(double R, double B, double h) {
    Lattice2D l;
    l.W = Mat2::diag(2.0 * kPi / (R * B), kPi / (R * B));
    l.s = 1.0;
    l.h = h;
    return l;
}

FrequencyRegion range_triangle(double beta, double R, double B) {
    if (std::abs(beta) > kPi / 2.0)
        throw std::invalid_argument("range_triangle: |beta| > pi/2");
    return FrequencyRegion::double_triangle_fan(R, B, beta);
}

double resolution_diagram(Vec2 x, double s_alpha, double s_beta, double R, DiagramMode mode,
                          double theta) {
    if (x.norm() >= R) throw std::invalid_argument("resolution_diagram: |x| >= R");
    Vec2 th = omega(theta);
    double A = dot(x, th.perp());
    double D = std::sqrt(std::max(R * R - dot(x, th) * dot(x, th), 0.0));
    double inf = std::numeric_limits<double>::infinity();
    double c1 = A == 0.0 ? inf : kPi / (s_alpha * std::abs(A));
    double rp = (D + A) == 0.0 ? inf : kPi / (s_beta * std::abs(D + A));
    double rm = (A - D) == 0.0 ? inf : kPi / (s_beta * std::abs(A - D));
    double c2 = mode == DiagramMode::intersection ? std::min(rp, rm) : std::max(rp, rm);
    return std::min(c1, c2);
}

std::function<double(Vec2, Vec2)> blur_symbol_fan(double a, double b,
                                                  std::function<double(double)> psi, double R) {
    return [a, b, R, psi = std::move(psi)](Vec2 x, Vec2 xi) {
        double c = dot(x, xi.perp());
        double D = std::sqrt(std::max(R * R * dot(xi, xi) - dot(x, xi) * dot(x, xi), 0.0));
        return 0.5 * psi(a * c * c + b * (c + D) * (c + D)) +
               0.5 * psi(a * c * c + b * (c - D) * (c - D));
    };
}

FanSinogram fan_forward(const Grid2D& f, const WeightFn& weight, const FanSinogram& geometry) {
    FanSinogram out = geometry;
    out.weighted = !weight.is_unit;
    std::fill(out.values.begin(), out.values.end(), 0.0);
    const double step0 = 0.5 * std::min(f.dx(), f.dy());
    for (int i = 0; i < out.alpha_count; ++i) {
        double alpha = out.alpha(i);
        Vec2 src = omega(alpha) * out.R;
        for (int j = 0; j < out.beta_count; ++j) {
            double beta = out.beta(j);
            double chord = 2.0 * out.R * std::cos(beta);
            if (chord <= 0.0) continue;
            Vec2 dir = omega(alpha + beta) * (-1.0);
            Vec2 w = omega(alpha + beta - kPi / 2.0);
            int n = std::max(2, static_cast<int>(std::ceil(chord / step0)));
            double dt = chord / n;
            double acc = 0.0;
            for (int m = 0; m <= n; ++m) {
                double t = m * dt;
                Vec2 x{src.x + t * dir.x, src.y + t * dir.y};
                double v = f.interp(x) * weight(x, w);
                acc += (m == 0 || m == n) ? 0.5 * v : v;
            }
            out.at(i, j) = acc * dt;
        }
    }
    return out;
}

ParallelSinogram rebin_to_parallel(const FanSinogram& fan, int phi_count, int p_count) {
    ParallelSinogram out = make_parallel_sinogram(phi_count, p_count, fan.R, fan.R, fan.h);
    out.weighted = fan.weighted;
    auto lanc = [](double t) {
        if (std::abs(t) >= 3.0) return 0.0;
        if (std::abs(t) < 1e-8) return 1.0;
        double a = kPi * t;
        return std::sin(a) / a * std::sin(a / 3.0) / (a / 3.0);
    };
    for (int i = 0; i < phi_count; ++i) {
        for (int j = 0; j < p_count; ++j) {
            double p = out.p(j);
            if (std::abs(p) >= fan.R) continue;
            auto [alpha, beta] = parallel_to_fan(out.phi(i), p, fan.R);
            double fa = alpha / fan.dalpha();               // periodic axis
            double fb = (beta + kPi / 2.0) / fan.dbeta();   // clamped axis
            double acc = 0.0, wsum = 0.0;
            for (int da = static_cast<int>(std::ceil(fa)) - 3;
                 da <= static_cast<int>(std::floor(fa)) + 3; ++da) {
                double wa = lanc(fa - da);
                if (wa == 0.0) continue;
                int ia = ((da % fan.alpha_count) + fan.alpha_count) % fan.alpha_count;
                for (int db = static_cast<int>(std::ceil(fb)) - 3;
                     db <= static_cast<int>(std::floor(fb)) + 3; ++db) {
                    if (db < 0 || db >= fan.beta_count) continue;
                    double wb = lanc(fb - db);
                    acc += wa * wb * fan.at(ia, db);
                    wsum += wa * wb;
                }
            }
            if (wsum != 0.0) out.at(i, j) = acc / wsum;
        }
    }
    return out;
}

std::pair<FanSinogram, Grid2D> fan_forward_and_fbp(const Grid2D& f, const FanSinogram& geometry,
                                                   const WindowSpec& window, const Grid2D& target,
                                                   double alpha_lo, double alpha_hi) {
    FanSinogram fan = fan_forward(f, WeightFn::unit(), geometry);
    double span = alpha_hi - alpha_lo;
    if (span <= 0.0 || span > kTwoPi + 1e-12)
        throw std::invalid_argument("fan_forward_and_fbp: bad alpha range");

    FanSinogram masked = fan;
    if (span < kTwoPi - 1e-12) {
        const double taper = kPi / 36.0;  // 5 degrees
        auto ramp = [taper](double t) {
            if (t <= 0.0) return 0.0;
            if (t >= taper) return 1.0;
            return 0.5 * (1.0 - std::cos(kPi * t / taper));
        };
        for (int i = 0; i < masked.alpha_count; ++i) {
            double a = wrap_angle(masked.alpha(i) - alpha_lo);
            double m = a <= span ? ramp(a) * ramp(span - a) : 0.0;
            for (int j = 0; j < masked.beta_count; ++j) masked.at(i, j) *= m;
        }
    }

    // Rebinning resolution tracks the fan grid.
    int phi_count = masked.alpha_count;
    int p_count = masked.beta_count * 2;
    ParallelSinogram par = rebin_to_parallel(masked, phi_count, p_count);
    Grid2D rec = fbp_invert(par, window, target);
    if (span < kTwoPi - 1e-12) {
        double gain = kTwoPi / span;
        for (double& v : rec.values) v *= gain;
    }
    return {std::move(fan), std::move(rec)};
}

}  // namespace mt
