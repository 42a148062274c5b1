// Acceptance checks: one numbered criterion per invocation, one PASS/FAIL
// line on stdout. Exit code 0 iff the criterion passes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mt/grid.hpp"
#include "mt/lattice.hpp"
#include "mt/radon_fanbeam.hpp"
#include "mt/radon_parallel.hpp"
#include "mt/tat.hpp"

using namespace mt;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

bool close_rel(double value, double target, double tol) {
    return std::abs(value - target) <= tol * std::abs(target);
}

double rel_l2(const Grid2D& a, const Grid2D& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double d = a.values[i] - b.values[i];
        num += d * d;
        den += b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

double det4(std::array<std::array<double, 4>, 4> a) {
    double det = 1.0;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < 4; ++r) {
            double fac = a[r][c] / a[c][c];
            for (int k = c; k < 4; ++k) a[r][k] -= fac * a[c][k];
        }
    }
    return det;
}

// Largest-|coefficient| bin among spectrum nodes passing the predicate.
std::pair<int, int> argmax_bin(const Spectrum2D& sp, const std::function<bool(Vec2)>& pred) {
    double best = -1.0;
    std::pair<int, int> at{0, 0};
    for (int i = 0; i < sp.nx; ++i)
        for (int j = 0; j < sp.ny; ++j) {
            if (!pred(sp.xi(i, j))) continue;
            double m = std::abs(sp.at(i, j));
            if (m > best) {
                best = m;
                at = {i, j};
            }
        }
    return at;
}

// Centroid of |values| over masked cells at least frac of the masked maximum.
Vec2 peak_centroid(const Grid2D& g, const std::function<bool(Vec2)>& mask, double frac,
                   double* mask_max = nullptr) {
    double top = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (mask(g.point(i, j))) top = std::max(top, std::abs(g.at(i, j)));
    if (mask_max) *mask_max = top;
    double wsum = 0.0;
    Vec2 c;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            Vec2 p = g.point(i, j);
            double v = std::abs(g.at(i, j));
            if (!mask(p) || v < frac * top) continue;
            wsum += v;
            c = c + p * v;
        }
    return wsum > 0.0 ? c * (1.0 / wsum) : g.origin;
}

// In-place gaussian convolution along the second index of a row-major table.
void blur_columns(std::vector<double>& vals, int rows, int cols, double sigma_cells) {
    int rad = static_cast<int>(std::ceil(4.0 * sigma_cells));
    std::vector<double> w(2 * rad + 1);
    double sum = 0.0;
    for (int m = -rad; m <= rad; ++m) {
        w[m + rad] = std::exp(-0.5 * m * m / (sigma_cells * sigma_cells));
        sum += w[m + rad];
    }
    for (double& x : w) x /= sum;
    std::vector<double> row(cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int m = -rad; m <= rad; ++m) {
                int jj = j + m;
                if (jj >= 0 && jj < cols) acc += w[m + rad] * vals[i * cols + jj];
            }
            row[j] = acc;
        }
        for (int j = 0; j < cols; ++j) vals[i * cols + j] = row[j];
    }
}

double trace_at(const BoundaryTrace& tr, double t, double y) {
    return tr.as_grid().interp({t, y - tr.seg_a.y});
}

// ---------------------------------------------------------------------------
// 1. Sample-count ratios at h = 0.01, R = B = 1.

bool criterion1(std::string& d) {
    const double h = 0.01;
    Lattice2D par;
    par.W = Mat2::diag(kPi, kPi);  // Nyquist steps (pi/(R B), pi/B)
    par.h = h;
    long n_par = lattice_point_count(par, Rect{{0.0, -1.0}, {kTwoPi, 1.0}});

    Lattice2D fan;
    fan.W = Mat2::diag(kPi, kPi / 2.0);
    fan.h = h;
    long n_fan = lattice_point_count(fan, Rect{{0.0, -kPi / 2.0}, {kTwoPi, kPi / 2.0}});

    long n_eff = plan_point_count(strip_sampling_plan(1.0, 1.0, 1, h));
    double two_nf = 2.0 * weyl_count(kPi * kPi, h);

    double r1 = n_par / two_nf;
    double r2 = n_eff / two_nf;
    double r3 = static_cast<double>(n_fan) / n_par;
    d = fmt("par/2Nf=%.4f (8/pi=%.4f), eff/2Nf=%.4f (4/pi=%.4f), fan/par=%.4f (pi)", r1,
            8.0 / kPi, r2, 4.0 / kPi, r3);
    return close_rel(r1, 8.0 / kPi, 0.03) && close_rel(r2, 4.0 / kPi, 0.03) &&
           close_rel(r3, kPi, 0.03);
}

// ---------------------------------------------------------------------------
// 2. Phase-volume count for the box set approaches the Weyl bound.

std::array<double, 3> weyl_deviations() {
    const double hs[3] = {0.04, 0.02, 0.01};
    std::array<double, 3> dev{};
    for (int i = 0; i < 3; ++i) {
        Lattice2D l;
        l.W = Mat2::diag(kPi, kPi);  // Nyquist lattice for the unit frequency box
        l.h = hs[i];
        long n = lattice_point_count(l, Rect{{-1.0, -1.0}, {1.0, 1.0}});
        dev[i] = std::abs(1.0 - n / weyl_count(16.0, hs[i]));
    }
    return dev;
}

bool criterion2(std::string& d) {
    auto dev = weyl_deviations();
    d = fmt("deviation from Weyl count: %.4f (h=0.04) %.4f (h=0.02) %.4f (h=0.01)", dev[0],
            dev[1], dev[2]);
    return dev[0] > dev[1] && dev[1] > dev[2] && dev[2] < 0.05;
}

// ---------------------------------------------------------------------------
// 3. Shannon reconstruction of a properly sampled coherent state.

struct SamplingErrors {
    double rec = 0.0;
    double par = 0.0;
};

SamplingErrors sampling_errors(double h) {
    const double B = 1.5, s = 0.8;
    PhantomSpec cs = PhantomSpec::coherent({0.1, 0.0}, {0.0, 1.0});
    Lattice2D lat;
    lat.W = Mat2::diag(kPi / B, kPi / B);
    lat.s = s;
    lat.h = h;
    std::function<double(Vec2)> fn = [cs, h](Vec2 x) { return cs.evaluate(x, h); };
    SampleSet set = sample(fn, lat, Rect{{-1.0, -1.0}, {1.0, 1.0}});

    Grid2D target = make_grid({-0.85, -0.85}, {1.7, 1.7}, 128, 128, h);
    Grid2D rec = reconstruct(set, WindowSpec::trapezoid(0.8), target);
    Grid2D exact = render_phantom(cs, target);

    Grid2D fine = render_phantom(cs, make_grid({-1.0, -1.0}, {2.0, 2.0}, 512, 512, h));
    return {rel_l2(rec, exact), parseval_residual(set, fine.l2_norm())};
}

bool criterion3(std::string& d) {
    SamplingErrors coarse = sampling_errors(0.02);
    SamplingErrors fine = sampling_errors(0.01);
    d = fmt("rec err %.2e -> %.2e, parseval %.2e -> %.2e", coarse.rec, fine.rec, coarse.par,
            fine.par);
    bool small = fine.rec < 1e-4 && fine.par < 1e-4;
    bool rec_drop = coarse.rec >= 4.0 * fine.rec;
    // The Parseval residual bottoms out at the arithmetic floor well before
    // h = 0.01; treat a residual below 1e-12 as converged.
    bool par_drop = fine.par < 1e-12 || coarse.par >= 4.0 * fine.par;
    return small && rec_drop && par_drop;
}

// ---------------------------------------------------------------------------
// 4. Two-state undersampling demo: peak moves by one reciprocal vector.

bool criterion4(std::string& d) {
    const double B = 1.0;
    const double h = 0.05 * 4.0 / kTwoPi;  // frequency bin exactly 0.05
    Grid2D geo = make_grid({-2.0, -2.0}, {4.0, 4.0}, 80, 80, h);
    const double half_bin = 0.025;

    // Subsampling every second node corresponds to axis rates s = (pi, pi),
    // i.e. a reciprocal shift of 2B on each axis.
    auto displacement = [&](Vec2 xi0, bool lower_half) {
        Grid2D g = render_phantom(PhantomSpec::coherent({0.0, 0.0}, xi0), geo);
        Spectrum2D full = sc_fourier(g);
        Grid2D sub = make_grid(geo.origin, geo.extent, 40, 40, h);
        for (int i = 0; i < 40; ++i)
            for (int j = 0; j < 40; ++j) sub.at(i, j) = g.at(2 * i, 2 * j);
        Spectrum2D subsp = sc_fourier(sub);
        Spectrum2D folded = fold_spectrum(full, {kPi, kPi}, WindowSpec::sinc());

        auto upper = [](Vec2 xi) { return xi.y > 0.1; };
        auto lower = [](Vec2 xi) { return xi.y < -0.1; };
        auto [oi, oj] = argmax_bin(full, upper);
        Vec2 orig = full.xi(oi, oj);
        auto side = lower_half ? std::function<bool(Vec2)>(lower) : upper;
        auto [mi, mj] = argmax_bin(subsp, side);
        auto [fi, fj] = argmax_bin(folded, side);
        Vec2 measured = subsp.xi(mi, mj) - orig;
        Vec2 model = folded.xi(fi, fj) - orig;
        return std::pair<Vec2, Vec2>(measured, model);
    };

    // Out-of-band state: the positive peak at (0, 1.5) reappears at (0, -0.5).
    auto [mA, fA] = displacement({0.0, 1.5}, true);
    // In-band control keeps its peak in place.
    auto [mB, fB] = displacement({0.0, 0.3}, false);

    bool moved = std::abs(mA.x) < half_bin && std::abs(mA.y + 2.0 * B) < half_bin &&
                 std::abs(fA.x) < half_bin && std::abs(fA.y + 2.0 * B) < half_bin;
    bool still = mB.norm() < half_bin && fB.norm() < half_bin;
    d = fmt("measured shift (%.3f, %.3f) vs (0, -2B); control shift (%.3f, %.3f)", mA.x, mA.y,
            mB.x, mB.y);
    return moved && still;
}

// ---------------------------------------------------------------------------
// 5. Predicted aliasing artifacts in filtered back-projection images.

bool criterion5(std::string& d) {
    const double h = 0.01;
    Grid2D target = make_grid({-1.0, -1.0}, {2.0, 2.0}, 256, 256, h);
    const double dx = target.dx();

    // Angular undersampling at 3 degrees.
    Vec2 x0{0.7, 0.0}, xi0{0.0, 1.0};
    Grid2D f = render_phantom(PhantomSpec::coherent(x0, xi0),
                              make_grid({-1.1, -1.1}, {2.2, 2.2}, 256, 256, h));
    ParallelSinogram coarse_geo = make_parallel_sinogram(120, 512, 1.1, 1.0, h);
    ParallelSinogram fine_geo = make_parallel_sinogram(720, 512, 1.1, 1.0, h);
    Grid2D rec_alias = fbp_invert(forward(f, WeightFn::unit(), coarse_geo), WindowSpec::sinc(),
                                  target);
    Grid2D rec_ctrl = fbp_invert(forward(f, WeightFn::unit(), fine_geo), WindowSpec::sinc(),
                                 target);

    double s_phi = coarse_geo.dphi() / h;
    double s_p = coarse_geo.dp() / h;
    auto pred = alias_artifact_predict(x0, xi0, s_phi, s_p, -1, AliasKind::angular);
    if (pred.empty()) {
        d = "no admissible angular artifact predicted";
        return false;
    }
    Vec2 ghost = pred.front().x;

    auto left = [](Vec2 p) { return p.x <= -0.1 && std::abs(p.y) <= 0.5; };
    Grid2D env_alias = envelope(rec_alias, {0.0, 1.0});
    Grid2D env_ctrl = envelope(rec_ctrl, {0.0, 1.0});
    double max_alias = 0.0, max_ctrl = 0.0;
    Vec2 c_alias = peak_centroid(env_alias, left, 0.5, &max_alias);
    peak_centroid(env_ctrl, left, 0.5, &max_ctrl);
    auto everywhere = [](Vec2 p) { return std::abs(p.x) <= 0.95 && std::abs(p.y) <= 0.95; };
    Vec2 c_ctrl = peak_centroid(env_ctrl, everywhere, 0.5);

    bool angular_ok = (c_alias - ghost).norm() <= 2.0 * dx &&
                      (c_ctrl - x0).norm() <= 2.0 * dx && max_ctrl < 0.33 * max_alias;

    // Radial undersampling: p step above Nyquist for the state frequency.
    ParallelSinogram rad_geo = make_parallel_sinogram(360, 56, 1.1, 1.0, h);
    double rs_phi = rad_geo.dphi() / h;
    double rs_p = rad_geo.dp() / h;

    auto radial_case = [&](Vec2 c) {
        Grid2D g = render_phantom(PhantomSpec::coherent(c, xi0),
                                  make_grid({-1.1, -1.1}, {2.2, 2.2}, 256, 256, h));
        Grid2D rec = fbp_invert(forward(g, WeightFn::unit(), rad_geo), WindowSpec::sinc(),
                                target);
        return envelope(rec, {0.0, 1.0});
    };
    auto predicted = [&](Vec2 c) {
        auto pts = alias_artifact_predict(c, xi0, rs_phi, rs_p, -1, AliasKind::radial);
        return pts.empty() ? Vec2{1e9, 1e9} : pts.front().x;
    };
    Vec2 ghostA = predicted({0.2, 0.0});   // lands inside the image
    Vec2 ghostB = predicted({0.8, 0.0});   // lands outside [-1,1]^2
    bool admissibility = std::max(std::abs(ghostA.x), std::abs(ghostA.y)) < 1.0 &&
                         std::max(std::abs(ghostB.x), std::abs(ghostB.y)) > 1.0;

    Grid2D envA = radial_case({0.2, 0.0});
    Grid2D envB = radial_case({0.8, 0.0});
    double maxA = 0.0, maxB = 0.0;
    auto ghost_region = [&](Vec2 p) { return p.x <= -0.05 && std::abs(p.y) <= 0.5; };
    Vec2 cA = peak_centroid(envA, ghost_region, 0.5, &maxA);
    // Case B: its ghost lies outside the image, so the same sweep away from
    // the true peak should find nothing comparable.
    auto away = [](Vec2 p) {
        return p.x >= -0.9 && p.x <= 0.4 && std::abs(p.y) <= 0.9;
    };
    peak_centroid(envB, away, 0.5, &maxB);
    bool radial_ok = admissibility && (cA - ghostA).norm() <= 2.0 * dx && maxB < 0.33 * maxA;

    d = fmt("angular ghost (%.3f, %.3f) vs (%.3f, %.3f); radial ghost (%.3f, %.3f) vs "
            "(%.3f, %.3f), vanish ratio %.2f",
            c_alias.x, c_alias.y, ghost.x, ghost.y, cA.x, cA.y, ghostA.x, ghostA.y,
            maxB / maxA);
    return angular_ok && radial_ok;
}

// ---------------------------------------------------------------------------
// 6. Canonical-map suite: round trips, Jacobians, lift, symmetry.

bool criterion6(std::string& d) {
    const double R = 1.3;
    const double eps = 1e-5;
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> upos(-0.65, 0.65), uang(0.0, kTwoPi),
        umag(0.2, 2.0);

    double worst_rt = 0.0, worst_jac = 0.0, worst_lift = 0.0, worst_sym = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Vec2 x{upos(rng), upos(rng)};
        Vec2 xi = omega(uang(rng)) * umag(rng);
        int sign = (trial % 2 == 0) ? +1 : -1;

        ParallelCotangent qp = canonical_forward(x, xi, sign);
        auto [xr, xir] = canonical_inverse(qp);
        worst_rt = std::max({worst_rt, (xr - x).norm(), (xir - xi).norm()});

        FanCotangent qf = canonical_forward_fan(x, xi, R, sign);
        auto [yr, yir] = canonical_inverse_fan(qf, R);
        worst_rt = std::max({worst_rt, (yr - x).norm(), (yir - xi).norm()});

        // Lift of the parallel covector through the coordinate change.
        worst_lift = std::max(worst_lift, std::abs(angle_diff(qf.alpha + qf.beta - kPi / 2.0,
                                                              qp.phi)));
        worst_lift = std::max(worst_lift, std::abs(R * std::sin(qf.beta) - qp.p));
        worst_lift = std::max(worst_lift, std::abs(qf.alpha_hat - qp.phi_hat));
        worst_lift = std::max(worst_lift,
                              std::abs(qf.beta_hat -
                                       (qp.phi_hat + qp.p_hat * R * std::cos(qf.beta))));

        // The data-side symmetry exchanges the two branch images.
        FanCotangent qf_other = canonical_forward_fan(x, xi, R, -sign);
        FanCotangent sw = fan_symmetry(qf);
        worst_sym = std::max({worst_sym, std::abs(angle_diff(sw.alpha, qf_other.alpha)),
                              std::abs(sw.beta - qf_other.beta),
                              std::abs(sw.alpha_hat - qf_other.alpha_hat),
                              std::abs(sw.beta_hat - qf_other.beta_hat)});

        // Jacobian determinants of both graph maps by central differences.
        double in[4] = {x.x, x.y, xi.x, xi.y};
        std::array<std::array<double, 4>, 4> jp{}, jf{};
        for (int c = 0; c < 4; ++c) {
            double save = in[c];
            in[c] = save + eps;
            ParallelCotangent pp = canonical_forward({in[0], in[1]}, {in[2], in[3]}, sign);
            FanCotangent fp = canonical_forward_fan({in[0], in[1]}, {in[2], in[3]}, R, sign);
            in[c] = save - eps;
            ParallelCotangent pm = canonical_forward({in[0], in[1]}, {in[2], in[3]}, sign);
            FanCotangent fm = canonical_forward_fan({in[0], in[1]}, {in[2], in[3]}, R, sign);
            in[c] = save;
            jp[0][c] = angle_diff(pp.phi, pm.phi) / (2.0 * eps);
            jp[1][c] = (pp.p - pm.p) / (2.0 * eps);
            jp[2][c] = (pp.phi_hat - pm.phi_hat) / (2.0 * eps);
            jp[3][c] = (pp.p_hat - pm.p_hat) / (2.0 * eps);
            jf[0][c] = angle_diff(fp.alpha, fm.alpha) / (2.0 * eps);
            jf[1][c] = (fp.beta - fm.beta) / (2.0 * eps);
            jf[2][c] = (fp.alpha_hat - fm.alpha_hat) / (2.0 * eps);
            jf[3][c] = (fp.beta_hat - fm.beta_hat) / (2.0 * eps);
        }
        worst_jac = std::max({worst_jac, std::abs(std::abs(det4(jp)) - 1.0),
                              std::abs(std::abs(det4(jf)) - 1.0)});
    }
    d = fmt("round trip %.1e, jacobian %.1e, lift %.1e, symmetry %.1e", worst_rt, worst_jac,
            worst_lift, worst_sym);
    return worst_rt < 1e-10 && worst_jac < 1e-6 && worst_lift < 1e-10 && worst_sym < 1e-10;
}

// ---------------------------------------------------------------------------
// 7. Forward-operator identities.

bool criterion7(std::string& d) {
    // Fourier slice: the 1D transform of a projection equals a slice of the
    // 2D transform.
    const double hs = 0.05;
    Grid2D gs = make_grid({-1.0, -1.0}, {2.0, 2.0}, 384, 384, hs);
    Grid2D fs = render_phantom(
        PhantomSpec::gaussians({{0.2, 0.1}, {-0.3, -0.2}}, {0.16, 0.2}, {1.0, 0.7}), gs);
    // Generous support radius: the gaussian tails reach past the unit disk,
    // and the slice identity sees any chord truncation as bias.
    ParallelSinogram sino = forward(fs, WeightFn::unit(),
                                    make_parallel_sinogram(12, 256, 1.4, 1.35, hs));
    double slice_err = 0.0;
    for (auto [i, sigma] : {std::pair<int, double>{0, 0.3}, {5, 0.6}, {9, 0.5}}) {
        double k = sigma / hs;
        Vec2 w = omega(sino.phi(i));
        std::complex<double> D = 0.0, F = 0.0;
        for (int j = 0; j < sino.p_count; ++j)
            D += sino.at(i, j) * std::polar(sino.dp(), -k * sino.p(j));
        double cell = gs.dx() * gs.dy();
        for (int a = 0; a < gs.nx; ++a)
            for (int b = 0; b < gs.ny; ++b)
                F += fs.at(a, b) * std::polar(cell, -k * dot(gs.point(a, b), w));
        slice_err = std::max(slice_err, std::abs(D - F) / std::abs(F));
    }

    // Evenness: the same line appears at (phi + pi, -p).
    ParallelSinogram ev = forward(fs, WeightFn::unit(),
                                  make_parallel_sinogram(16, 32, 1.2, 1.0, hs));
    double ev_max = 0.0, ev_err = 0.0;
    for (double v : ev.values) ev_max = std::max(ev_max, std::abs(v));
    for (int i = 0; i < 16; ++i)
        for (int j = 1; j < 32; ++j)
            ev_err = std::max(ev_err,
                              std::abs(ev.at(i, j) - ev.at((i + 8) % 16, 32 - j)) / ev_max);

    // Spectral support of a coherent-state sinogram stays in the cone
    // |phi_hat| <= R |p_hat|, and of the fan data in the sheared triangle.
    const double h = 0.01;
    Grid2D g = render_phantom(PhantomSpec::coherent({0.5, 0.0}, {0.0, 1.0}),
                              make_grid({-1.1, -1.1}, {2.2, 2.2}, 256, 256, h));
    ParallelSinogram ps = forward(g, WeightFn::unit(),
                                  make_parallel_sinogram(180, 160, 1.1, 1.0, h));
    double cone_out = energy_fraction_outside(sc_fourier(ps.as_grid()),
                                              FrequencyRegion::cone_parallel(1.05, 1.4));
    FanSinogram fsino = fan_forward(g, WeightFn::unit(), make_fan_sinogram(180, 288, 1.3, h));
    double fan_out = energy_fraction_outside(sc_fourier(fsino.as_grid()),
                                             FrequencyRegion::double_triangle_fan(1.35, 1.45,
                                                                                  0.0));
    d = fmt("slice %.2e, evenness %.2e, cone leak %.2e, fan range leak %.2e", slice_err,
            ev_err, cone_out, fan_out);
    return slice_err < 1e-3 && ev_err < 1e-6 && cone_out < 1e-3 && fan_out < 1e-3;
}

// ---------------------------------------------------------------------------
// 8. Averaged-data blur kernels.

bool criterion8(std::string& d) {
    const double h = 0.01, w = 0.02;

    // Gaussian p-averaging: point response = inverse transform of
    // exp(-a |xi|^2) times the phantom's own gaussian envelope.
    const double a = 4.0;
    Grid2D g = render_phantom(PhantomSpec::gaussians({{0.0, 0.0}}, {w}, {1.0}),
                              make_grid({-0.3, -0.3}, {0.6, 0.6}, 192, 192, h));
    ParallelSinogram sino = forward(g, WeightFn::unit(),
                                    make_parallel_sinogram(720, 512, 0.35, 0.3, h));
    double sigma_p = std::sqrt(2.0 * a) * h;
    blur_columns(sino.values, sino.phi_count, sino.p_count, sigma_p / sino.dp());
    Grid2D window = make_grid({-0.15, -0.15}, {0.3, 0.3}, 128, 128, h);
    Grid2D rec = fbp_invert(sino, WindowSpec::sinc(), window);

    double t = a + w * w / (2.0 * h * h);
    Grid2D predicted = make_grid(window.origin, window.extent, window.nx, window.ny, h);
    for (int i = 0; i < predicted.nx; ++i)
        for (int j = 0; j < predicted.ny; ++j)
            predicted.at(i, j) = std::exp(-predicted.point(i, j).norm2() / (4.0 * t * h * h));
    double rec_peak = 0.0;
    for (double v : rec.values) rec_peak = std::max(rec_peak, v);
    for (double& v : rec.values) v /= rec_peak;
    double blur_err = rel_l2(rec, predicted);

    // Gaussian beta-averaging of fan data at a point near the source circle:
    // the response is uniformly blurred along the radial direction (all
    // positive), while the circular profile keeps a sharp core that rings
    // negative at the band edge.
    const double b = 8.0, R = 1.5;
    const double wc = 0.008;
    Vec2 x0{0.93, 0.93};
    Grid2D gc = render_phantom(PhantomSpec::gaussians({x0}, {wc}, {1.0}, 1.45),
                               make_grid({0.73, 0.73}, {0.4, 0.4}, 128, 128, h));
    FanSinogram fan = fan_forward(gc, WeightFn::unit(), make_fan_sinogram(360, 480, R, h));
    double sigma_b = std::sqrt(2.0 * b) * h;
    blur_columns(fan.values, fan.alpha_count, fan.beta_count, sigma_b / fan.dbeta());
    ParallelSinogram par = rebin_to_parallel(fan, 360, 512);
    Grid2D cw = make_grid({0.78, 0.78}, {0.3, 0.3}, 160, 160, h);
    Grid2D krn = fbp_invert(par, WindowSpec::sinc(), cw);

    Vec2 u = x0 * (1.0 / x0.norm());  // radial direction
    Vec2 v = u.perp();                // circular direction
    double peak = 0.0;
    Vec2 at;
    for (int i = 0; i < krn.nx; ++i)
        for (int j = 0; j < krn.ny; ++j)
            if (krn.at(i, j) > peak) {
                peak = krn.at(i, j);
                at = krn.point(i, j);
            }
    double rad_min = 0.0, circ_min = 0.0, rad_wing = 0.0;
    for (double s = -0.08; s <= 0.08; s += 0.002) {
        rad_min = std::min(rad_min, krn.interp(x0 + u * s));
        circ_min = std::min(circ_min, krn.interp(x0 + v * s));
    }
    rad_wing = 0.5 * (krn.interp(x0 + u * 0.04) + krn.interp(x0 - u * 0.04));

    bool corner_ok = peak > 0.0 && (at - x0).norm() <= 0.02 &&
                     circ_min < -0.02 * peak &&    // negative circular lobe
                     rad_min > -0.02 * peak &&     // no radial sign change
                     rad_wing > 0.05 * peak;       // radial lobe stays wide
    d = fmt("p-blur kernel err %.3f; corner: peak %.2e at (%.3f, %.3f), circular lobe "
            "%.3f of peak, radial min %.3f, radial wing %.3f",
            blur_err, peak, at.x, at.y, circ_min / peak, rad_min / peak, rad_wing / peak);
    return blur_err < 0.10 && corner_ok;
}

// ---------------------------------------------------------------------------
// 9. Acoustic wave solver and boundary traces.

bool criterion9(std::string& d) {
    const double h = 0.01;

    // Oscillatory source in a lens medium, observed on the right edge.
    Grid2D geo = make_grid({-2.0, -2.0}, {4.0, 4.0}, 256, 256, h);
    Grid2D f = render_phantom(PhantomSpec::oscillatory({0.3, 0.0}, {1.0, 0.0}, 0.02, 1.0),
                              geo);
    double fmax = max_frequency(sc_fourier(f));
    // The speed bound shows up on the time axis of the trace; the transverse
    // component only widens the radial norm inside the allowed cone.
    auto max_tau = [](const Spectrum2D& sp) {
        double top = 0.0;
        for (const auto& c : sp.coefficients) top = std::max(top, std::abs(c));
        double best = 0.0;
        for (int i = 0; i < sp.nx; ++i)
            for (int j = 0; j < sp.ny; ++j)
                if (std::abs(sp.at(i, j)) >= 1e-2 * top)
                    best = std::max(best, std::abs(sp.xi(i, j).x));
        return best;
    };
    SpeedField slow = SpeedField::lens(-0.5, 2.0 * std::sqrt(2.0));
    SpeedField fast = SpeedField::lens(+0.5, 2.0 * std::sqrt(2.0));
    WaveResult rs = solve_wave(f, slow, WaveModel::free_space, 4.0, 0.45);
    double cone = cone_check(rs.trace, fmax, slow.M());
    double ratio_slow = max_tau(trace_spectrum(rs.trace)) / fmax;
    WaveResult rf = solve_wave(f, fast, WaveModel::free_space, 4.0, 0.45);
    double ratio_fast = max_tau(trace_spectrum(rf.trace)) / fmax;

    // Discrete energy balance of the reflecting model.
    Grid2D geo1 = make_grid({-1.0, -1.0}, {2.0, 2.0}, 256, 256, h);
    Grid2D bump = render_phantom(PhantomSpec::gaussians({{0.1, -0.1}}, {0.1}, {1.0}), geo1);
    WaveResult rn = solve_wave(bump, SpeedField::constant(1.0), WaveModel::neumann_reflect,
                               4.0, 0.45);
    double lo = rn.energy.front(), hi = lo;
    for (double e : rn.energy) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    double drift = (hi - lo) / hi;

    // Hamiltonian conservation along lens rays.
    Rect dom{{-1.0, -1.0}, {1.0, 1.0}};
    SpeedField lens = SpeedField::lens(0.4);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), ut(0.0, kTwoPi);
    double ray_err = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        Vec2 p0{ux(rng), ux(rng)};
        Vec2 xi0 = omega(ut(rng));
        RayExit e = trace_ray(p0, xi0, lens, dom);
        double H0 = lens(p0) * xi0.norm();
        ray_err = std::max(ray_err, std::abs(lens(e.y) * e.xi_exit.norm() - H0) / H0);
    }

    // Reflecting trace doubles the free-space trace before re-arrivals.
    Grid2D b0 = render_phantom(PhantomSpec::gaussians({{0.0, 0.0}}, {0.1}, {1.0}), geo1);
    SpeedField unit_c = SpeedField::constant(1.0);
    BoundaryTrace tr_free = solve_wave(b0, unit_c, WaveModel::free_space, 2.0, 0.4).trace;
    BoundaryTrace tr_refl = solve_wave(b0, unit_c, WaveModel::neumann_reflect, 2.0, 0.4).trace;
    double scale = 0.0, worst = 0.0;
    for (double v : tr_free.values) scale = std::max(scale, std::abs(v));
    // First return at the probed points arrives at sqrt(1 + (2-|y|)^2) >= 1.97
    // minus the pulse's leading width ~3w, so stop the comparison at t = 1.6.
    for (double t = 0.1; t <= 1.6; t += 0.025)
        for (double y = -0.3; y <= 0.3; y += 0.05)
            worst = std::max(worst,
                             std::abs(trace_at(tr_refl, t, y) - 2.0 * trace_at(tr_free, t, y)));
    double doubling = worst / (2.0 * scale);

    d = fmt("drift %.4f, cone %.2e, slow ratio %.3f, fast ratio %.3f, ray %.1e, doubling "
            "%.3f",
            drift, cone, ratio_slow, ratio_fast, ray_err, doubling);
    return drift < 0.005 && cone < 1e-2 && ratio_slow > 0.9 && ratio_slow < 1.1 &&
           ratio_fast >= 1.05 && ray_err < 1e-8 && doubling < 0.05;
}

// ---------------------------------------------------------------------------
// 10. Fixed-precision surrogate for the vanishing-h limits: the criterion 2
// deviations shrink monotonically and the criterion 3 errors drop by >= 4x.

bool criterion10(std::string& d) {
    auto dev = weyl_deviations();
    bool weyl_ok = dev[0] > dev[1] && dev[1] > dev[2];
    SamplingErrors coarse = sampling_errors(0.02);
    SamplingErrors fine = sampling_errors(0.01);
    bool rec_ok = coarse.rec >= 4.0 * fine.rec;
    bool par_ok = fine.par < 1e-12 || coarse.par >= 4.0 * fine.par;
    d = fmt("count deviations %.4f > %.4f > %.4f; errors %.2e -> %.2e (>=4x)", dev[0], dev[1],
            dev[2], coarse.rec, fine.rec);
    return weyl_ok && rec_ok && par_ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s <criterion 1..10>\n", argv[0]);
        return 2;
    }
    int n = std::atoi(argv[1]);
    bool (*checks[])(std::string&) = {criterion1, criterion2, criterion3, criterion4,
                                      criterion5, criterion6, criterion7, criterion8,
                                      criterion9, criterion10};
    if (n < 1 || n > 10) {
        std::fprintf(stderr, "usage: %s <criterion 1..10>\n", argv[0]);
        return 2;
    }
    std::string detail;
    bool ok = false;
    try {
        ok = checks[n - 1](detail);
    } catch (const std::exception& e) {
        detail = fmt("exception: %s", e.what());
    }
    std::printf("criterion %d: %s (%s)\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    return ok ? 0 : 1;
}
