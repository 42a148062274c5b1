#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mt/radon_fanbeam.hpp"

using namespace mt;

namespace {

FanCotangent map_at(const double q[4], double R, int sign) {
    return canonical_forward_fan({q[0], q[1]}, {q[2], q[3]}, R, sign);
}

double det4(double m[4][4]) {
    double d = 1.0;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (piv != c) {
            for (int j = 0; j < 4; ++j) std::swap(m[c][j], m[piv][j]);
            d = -d;
        }
        d *= m[c][c];
        for (int r = c + 1; r < 4; ++r) {
            double f = m[r][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return d;
}

}  // namespace

TEST_CASE("coordinate change between fan and parallel variables") {
    auto [phi, p] = fan_to_parallel(kPi / 2.0, 0.0, 1.0);
    CHECK(phi == doctest::Approx(0.0));
    CHECK(p == doctest::Approx(0.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi), up(-0.99, 0.99);
    for (int t = 0; t < 200; ++t) {
        double R = 1.3;
        double phi0 = ua(rng), p0 = up(rng) * R;
        auto [alpha, beta] = parallel_to_fan(phi0, p0, R);
        CHECK(std::abs(beta) < kPi / 2.0);
        auto [phi1, p1] = fan_to_parallel(alpha, beta, R);
        CHECK(std::abs(angle_diff(phi1, phi0)) < 1e-12);
        CHECK(p1 == doctest::Approx(p0).epsilon(1e-12));
    }
    CHECK_THROWS(parallel_to_fan(0.0, 1.4, 1.3));
}

TEST_CASE("data symmetry is an involution") {
    FanCotangent q{1.1, 0.4, -0.7, 0.3};
    FanCotangent qq = fan_symmetry(fan_symmetry(q));
    CHECK(std::abs(angle_diff(qq.alpha, q.alpha)) < 1e-12);
    CHECK(qq.beta == doctest::Approx(q.beta));
    CHECK(qq.alpha_hat == doctest::Approx(q.alpha_hat));
    CHECK(qq.beta_hat == doctest::Approx(q.beta_hat));
}

TEST_CASE("data symmetry swaps the two branch images") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    double R = 1.4;
    for (int t = 0; t < 100; ++t) {
        Vec2 x{u(rng), u(rng)};
        Vec2 xi{u(rng), u(rng)};
        if (xi.norm() < 0.1) continue;
        FanCotangent plus = canonical_forward_fan(x, xi, R, +1);
        FanCotangent minus = canonical_forward_fan(x, xi, R, -1);
        FanCotangent swapped = fan_symmetry(plus);
        CHECK(std::abs(angle_diff(swapped.alpha, minus.alpha)) < 1e-12);
        CHECK(swapped.beta == doctest::Approx(minus.beta).epsilon(1e-12));
        CHECK(swapped.alpha_hat == doctest::Approx(minus.alpha_hat).epsilon(1e-12));
        CHECK(swapped.beta_hat == doctest::Approx(minus.beta_hat).epsilon(1e-12));
    }
}

TEST_CASE("fan graph map hits the tabulated values") {
    FanCotangent q = canonical_forward_fan({0.0, 0.0}, {0.0, 1.0}, 1.0, +1);
    CHECK(q.alpha == doctest::Approx(kPi));
    CHECK(q.beta == doctest::Approx(0.0));
    CHECK(q.alpha_hat == doctest::Approx(0.0));
    CHECK(q.beta_hat == doctest::Approx(1.0));
    FanCotangent r = canonical_forward_fan({0.0, 0.0}, {0.0, 1.0}, 1.0, -1);
    CHECK(r.alpha == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.beta == doctest::Approx(0.0));
    CHECK(r.beta_hat == doctest::Approx(-1.0));
    FanCotangent t = canonical_forward_fan({0.5, 0.0}, {0.0, 1.0}, 1.0, +1);
    CHECK(t.alpha == doctest::Approx(kPi));
    CHECK(t.beta == doctest::Approx(0.0));
    CHECK(t.alpha_hat == doctest::Approx(0.5));
    CHECK(t.beta_hat == doctest::Approx(1.5));
}

TEST_CASE("fan graph map round trips") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    double R = 1.5;
    for (int t = 0; t < 500; ++t) {
        Vec2 x{u(rng), u(rng)};
        Vec2 xi{u(rng), u(rng)};
        if (xi.norm() < 0.05) continue;
        for (int sign : {+1, -1}) {
            auto [xb, xib] = canonical_inverse_fan(canonical_forward_fan(x, xi, R, sign), R);
            CHECK(std::abs(xb.x - x.x) < 1e-10);
            CHECK(std::abs(xb.y - x.y) < 1e-10);
            CHECK(std::abs(xib.x - xi.x) < 1e-10);
            CHECK(std::abs(xib.y - xi.y) < 1e-10);
        }
    }
}

TEST_CASE("fan graph map preserves phase-space volume") {
    const double pts[2][4] = {{0.3, -0.2, 0.4, 1.1}, {-0.4, 0.5, 1.2, 0.7}};
    double R = 1.5;
    for (auto& q0 : pts) {
        for (int sign : {+1, -1}) {
            double J[4][4];
            const double eps = 1e-5;
            for (int c = 0; c < 4; ++c) {
                double qp[4], qm[4];
                for (int i = 0; i < 4; ++i) qp[i] = qm[i] = q0[i];
                qp[c] += eps;
                qm[c] -= eps;
                FanCotangent a = map_at(qp, R, sign), b = map_at(qm, R, sign);
                J[0][c] = angle_diff(a.alpha, b.alpha) / (2 * eps);
                J[1][c] = (a.beta - b.beta) / (2 * eps);
                J[2][c] = (a.alpha_hat - b.alpha_hat) / (2 * eps);
                J[3][c] = (a.beta_hat - b.beta_hat) / (2 * eps);
            }
            CHECK(std::abs(std::abs(det4(J)) - 1.0) < 1e-5);
        }
    }
}

TEST_CASE("fan duals are the lifted parallel duals") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    double R = 1.3;
    for (int t = 0; t < 200; ++t) {
        Vec2 x{u(rng), u(rng)};
        Vec2 xi{u(rng), u(rng)};
        if (xi.norm() < 0.1) continue;
        for (int sign : {+1, -1}) {
            ParallelCotangent par = canonical_forward(x, xi, sign);
            FanCotangent fan = canonical_forward_fan(x, xi, R, sign);
            auto [phi, p] = fan_to_parallel(fan.alpha, fan.beta, R);
            CHECK(std::abs(angle_diff(phi, par.phi)) < 1e-10);
            CHECK(p == doctest::Approx(par.p).epsilon(1e-10));
            CHECK(fan.alpha_hat == doctest::Approx(par.phi_hat).epsilon(1e-10));
            double lift = par.phi_hat + par.p_hat * R * std::cos(fan.beta);
            CHECK(fan.beta_hat == doctest::Approx(lift).epsilon(1e-10));
        }
    }
}

TEST_CASE("fan rates are half the parallel radial rate per arc length") {
    auto [s_alpha, s_beta] = nyquist_rates_fan(2.0, 1.5);
    CHECK(s_alpha == doctest::Approx(kPi / 3.0));
    CHECK(s_beta == doctest::Approx(kPi / 6.0));
    Lattice2D l = fan_efficient_lattice(2.0, 1.5, 0.01);
    CHECK(l.W.m[0][0] == doctest::Approx(2.0 * kPi / 3.0));
    CHECK(l.W.m[1][1] == doctest::Approx(kPi / 3.0));
    CHECK(l.W.m[0][1] == 0.0);
}

TEST_CASE("range triangle membership") {
    FrequencyRegion tri = range_triangle(0.0, 1.0, 2.0);
    CHECK(tri.contains({0.5, 2.0}));       // |bh - ah| = 1.5 in [0.5, 2]
    CHECK_FALSE(tri.contains({1.5, 2.0})); // |bh - ah| = 0.5 < |ah|
    CHECK_FALSE(tri.contains({0.0, 2.5})); // above the band
    CHECK(tri.contains({-0.5, -2.0}));
    FrequencyRegion oblique = range_triangle(kPi / 3.0, 1.0, 2.0);
    CHECK(oblique.contains({0.0, 0.99}));  // bound shrinks to R B cos(beta) = 1
    CHECK_FALSE(oblique.contains({0.0, 1.01}));
}

TEST_CASE("resolution diagram bounds") {
    double s_alpha = kPi / 2.0, s_beta = kPi / 4.0, R = 1.0;
    // At the center both branches see the full chord.
    CHECK(resolution_diagram({0, 0}, s_alpha, s_beta, R, DiagramMode::intersection, 0.7) ==
          doctest::Approx(kPi / (s_beta * R)));
    CHECK(resolution_diagram({0, 0}, s_alpha, s_beta, R, DiagramMode::union_, 0.7) ==
          doctest::Approx(kPi / (s_beta * R)));
    // Off center the two branches differ and the union is at least the intersection.
    Vec2 x{0.5, 0.0};
    double th = kPi / 2.0;
    double A = -0.5, D = 1.0;
    double expect_int = std::min(kPi / (s_alpha * 0.5),
                                 std::min(kPi / (s_beta * std::abs(D + A)),
                                          kPi / (s_beta * std::abs(A - D))));
    CHECK(resolution_diagram(x, s_alpha, s_beta, R, DiagramMode::intersection, th) ==
          doctest::Approx(expect_int));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.7, 0.7), ut(0.0, kTwoPi);
    for (int t = 0; t < 100; ++t) {
        Vec2 y{u(rng), u(rng)};
        double theta = ut(rng);
        double lo = resolution_diagram(y, s_alpha, s_beta, R, DiagramMode::intersection, theta);
        double hi = resolution_diagram(y, s_alpha, s_beta, R, DiagramMode::union_, theta);
        CHECK(hi >= lo);
    }
    CHECK_THROWS(resolution_diagram({1.5, 0.0}, s_alpha, s_beta, R, DiagramMode::union_, 0.0));
}

TEST_CASE("fan blur symbol averages the two chord branches") {
    auto sym = blur_symbol_fan(0.5, 0.25, [](double t) { return std::exp(-t); }, 1.0);
    Vec2 x{0.5, 0.0}, xi{0.0, 1.0};
    double c = dot(x, xi.perp());  // -0.5
    double D = std::sqrt(1.0 - 0.0);
    double expect = 0.5 * std::exp(-(0.5 * c * c + 0.25 * (c + D) * (c + D))) +
                    0.5 * std::exp(-(0.5 * c * c + 0.25 * (c - D) * (c - D)));
    CHECK(sym(x, xi) == doctest::Approx(expect));
    CHECK(sym({0, 0}, {0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("fan data obey the ray-reversal symmetry on lattice nodes") {
    double h = 0.05;
    Grid2D geo = make_grid({-1.0, -1.0}, {2.0, 2.0}, 64, 64, h);
    Grid2D f = render_phantom(PhantomSpec::gaussians({{0.25, 0.1}, {-0.2, -0.3}}, {0.15, 0.2},
                                                     {1.0, 0.8}),
                              geo);
    FanSinogram sg = make_fan_sinogram(180, 90, 1.2, h);
    FanSinogram s = fan_forward(f, WeightFn::unit(), sg);
    double scale = 0.0;
    for (double v : s.values) scale = std::max(scale, std::abs(v));
    // With dalpha = dbeta the partner (alpha + 2 beta - pi, -beta) is a node.
    for (int i = 0; i < s.alpha_count; i += 7)
        for (int j = 1; j < s.beta_count; j += 5) {
            int i2 = ((i + 2 * j - 180) % 180 + 180) % 180;
            int j2 = 90 - j;
            CHECK(std::abs(s.at(i, j) - s.at(i2, j2)) < 1e-10 * scale);
        }
}

TEST_CASE("rebinned fan data match the direct parallel projection") {
    double h = 0.05;
    Grid2D geo = make_grid({-1.0, -1.0}, {2.0, 2.0}, 128, 128, h);
    Grid2D f = render_phantom(PhantomSpec::gaussians({{0.1, -0.05}}, {0.2}, {1.0}), geo);
    FanSinogram fg = make_fan_sinogram(256, 128, 1.2, h);
    FanSinogram fan = fan_forward(f, WeightFn::unit(), fg);
    ParallelSinogram reb = rebin_to_parallel(fan, 64, 64);
    ParallelSinogram pg = make_parallel_sinogram(64, 64, 1.2, 1.2, h);
    ParallelSinogram par = forward(f, WeightFn::unit(), pg);
    double scale = 0.0;
    for (double v : par.values) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            if (std::abs(reb.p(j)) > 0.8 * 1.2) continue;
            CHECK(std::abs(reb.at(i, j) - par.at(i, j)) < 2e-3 * scale);
        }
}

TEST_CASE("fan projection plus rebinned fbp reconstructs the phantom") {
    double h = 0.05;
    Grid2D geo = make_grid({-1.0, -1.0}, {2.0, 2.0}, 96, 96, h);
    Grid2D f = render_phantom(PhantomSpec::gaussians({{0.15, -0.1}, {-0.2, 0.2}}, {0.18, 0.22},
                                                     {1.0, 0.6}),
                              geo);
    FanSinogram fg = make_fan_sinogram(360, 180, 1.2, h);
    auto [fan, rec] = fan_forward_and_fbp(f, fg, WindowSpec::sinc(), geo);
    double err = 0.0, ref = 0.0;
    for (int i = 0; i < geo.nx; ++i)
        for (int j = 0; j < geo.ny; ++j) {
            Vec2 p = geo.point(i, j);
            if (p.norm() > 0.75) continue;
            double e = rec.at(i, j) - f.at(i, j);
            err += e * e;
            ref += f.at(i, j) * f.at(i, j);
        }
    CHECK(std::sqrt(err / ref) < 0.03);
    CHECK(!fan.values.empty());
}
