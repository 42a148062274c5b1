#include "mt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mt {

namespace {

double sinc1(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

// Numeric cosine transform of the lanczos kernel, cached per order.
double lanczos_chi_hat(int a, double v) {
    static std::map<int, std::vector<double>> cache;
    constexpr int kRes = 1536;
    constexpr double kVMax = 3.0;
    auto it = cache.find(a);
    if (it == cache.end()) {
        std::vector<double> tab(kRes + 1);
        const int qn = 4096;
        const double umax = a * kPi;
        const double du = umax / qn;
        for (int iv = 0; iv <= kRes; ++iv) {
            double vv = kVMax * iv / kRes;
            double acc = 0.0;
            for (int iu = 0; iu <= qn; ++iu) {
                double u = iu * du;
                double w = (iu == 0 || iu == qn) ? 0.5 : 1.0;
                acc += w * sinc1(u) * sinc1(u / a) * std::cos(u * vv);
            }
            tab[iv] = (2.0 / kPi) * acc * du;
        }
        it = cache.emplace(a, std::move(tab)).first;
    }
    double av = std::abs(v);
    if (av >= kVMax) return 0.0;
    double t = av / kVMax * kRes;
    int i0 = std::min(static_cast<int>(t), kRes - 1);
    double f = t - i0;
    return (1 - f) * it->second[i0] + f * it->second[i0 + 1];
}

}  // namespace

WindowSpec WindowSpec::sinc() {
    WindowSpec w;
    w.kind = Kind::sinc;
    return w;
}

WindowSpec WindowSpec::trapezoid(double delta) {
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("trapezoid window: delta must be in (0,1)");
    WindowSpec w;
    w.kind = Kind::trapezoid;
    w.delta = delta;
    return w;
}

WindowSpec WindowSpec::lanczos(int a) {
    if (a < 1) throw std::invalid_argument("lanczos window: order must be >= 1");
    WindowSpec w;
    w.kind = Kind::lanczos;
    w.lanczos_a = a;
    return w;
}

WindowSpec WindowSpec::tabulated(std::vector<double> chi_hat_half) {
    if (chi_hat_half.size() < 2)
        throw std::invalid_argument("tabulated window: need at least 2 samples");
    WindowSpec w;
    w.kind = Kind::tabulated;
    w.tab = std::move(chi_hat_half);
    return w;
}

double WindowSpec::kernel(double u) const {
    switch (kind) {
        case Kind::sinc:
            return sinc1(u);
        case Kind::trapezoid: {
            // Inverse transform of the trapezoid transfer function. Note the
            // central value (1+delta)/2: the plateau of chi_hat is what makes
            // this a reconstruction kernel, not node interpolation.
            if (std::abs(u) < 1e-4) {
                double d2 = delta * delta;
                return (1.0 + delta) / 2.0 -
                       u * u * (1.0 - d2 * d2) / (24.0 * (1.0 - delta));
            }
            return (std::cos(delta * u) - std::cos(u)) / ((1.0 - delta) * u * u);
        }
        case Kind::lanczos: {
            if (std::abs(u) >= lanczos_a * kPi) return 0.0;
            return sinc1(u) * sinc1(u / lanczos_a);
        }
        case Kind::tabulated: {
            // chi(u) = int_0^1 chi_hat(v) cos(u v) dv, trapezoid rule on tab.
            const int n = static_cast<int>(tab.size()) - 1;
            double acc = 0.0;
            for (int i = 0; i <= n; ++i) {
                double w = (i == 0 || i == n) ? 0.5 : 1.0;
                acc += w * tab[i] * std::cos(u * i / n);
            }
            return acc / n;
        }
    }
    return 0.0;
}

double WindowSpec::chi_hat(double v) const {
    double av = std::abs(v);
    switch (kind) {
        case Kind::sinc:
            return av <= 1.0 ? 1.0 : 0.0;
        case Kind::trapezoid:
            if (av <= delta) return 1.0;
            if (av < 1.0) return (1.0 - av) / (1.0 - delta);
            return 0.0;
        case Kind::lanczos:
            return lanczos_chi_hat(lanczos_a, v);
        case Kind::tabulated: {
            if (av >= 1.0) return 0.0;
            const int n = static_cast<int>(tab.size()) - 1;
            double t = av * n;
            int i0 = std::min(static_cast<int>(t), n - 1);
            double f = t - i0;
            return (1 - f) * tab[i0] + f * tab[i0 + 1];
        }
    }
    return 0.0;
}

int WindowSpec::truncation_radius() const {
    switch (kind) {
        case Kind::sinc:
            return 64;  // documented fixed radius; sinc tails decay like 1/u
        case Kind::lanczos:
            return lanczos_a;
        case Kind::trapezoid: {
            // |chi(pi k)| <= 2/((1-delta) pi^2 k^2); tail beyond m is about
            // 2/((1-delta) pi^2 m). Solve tail < 1e-9 * l1 mass (~1).
            double m = 2.0 / ((1.0 - delta) * kPi * kPi * 1e-9);
            return static_cast<int>(std::min(m, 1.0e9));
        }
        case Kind::tabulated:
            return 4096;
    }
    return 64;
}

Vec2 nyquist_steps(Vec2 B) {
    if (B.x <= 0.0 || B.y <= 0.0) throw std::invalid_argument("nyquist_steps: B must be positive");
    return {kPi / B.x, kPi / B.y};
}

Lattice2D lattice_from_translations(const Mat2& V, double s, double h, Vec2 offset) {
    if (V.det() == 0.0) throw std::invalid_argument("lattice_from_translations: singular V");
    Lattice2D l;
    l.W = V.transpose().inverse() * kTwoPi;
    l.s = s;
    l.h = h;
    l.offset = offset;
    return l;
}

bool tiling_disjoint(const FrequencyRegion& region, const Mat2& V, int probe) {
    Rect bb = region.bounding_box();  // throws for unbounded regions
    double sx = bb.width() / (probe - 1);
    double sy = bb.height() / (probe - 1);
    for (int k1 = -3; k1 <= 3; ++k1) {
        for (int k2 = -3; k2 <= 3; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            Vec2 t = V * Vec2{static_cast<double>(k1), static_cast<double>(k2)};
            // Quick reject via bounding boxes.
            if (bb.lo.x + t.x >= bb.hi.x || bb.hi.x + t.x <= bb.lo.x ||
                bb.lo.y + t.y >= bb.hi.y || bb.hi.y + t.y <= bb.lo.y)
                continue;
            long count = 0;
            for (int i = 0; i < probe; ++i) {
                for (int j = 0; j < probe; ++j) {
                    Vec2 p{bb.lo.x + i * sx, bb.lo.y + j * sy};
                    if (region.contains(p) && region.contains(p - t)) ++count;
                }
            }
            // A shared boundary curve hits O(probe) cells; a positive-area
            // overlap hits O(probe^2). Threshold between the two.
            if (count > 2 * probe) return false;
        }
    }
    return true;
}

namespace {

SampleSet sample_impl(const std::function<double(Vec2)>& eval, const Lattice2D& lattice,
                      Rect domain) {
    // Map the domain corners to lattice index space to bound the enumeration.
    Mat2 Winv = lattice.W.inverse();
    double sh = lattice.s * lattice.h;
    Vec2 corners[4] = {domain.lo,
                       {domain.hi.x, domain.lo.y},
                       {domain.lo.x, domain.hi.y},
                       domain.hi};
    double k1min = 1e300, k1max = -1e300, k2min = 1e300, k2max = -1e300;
    for (auto c : corners) {
        Vec2 k = Winv * ((c - lattice.offset) * (1.0 / sh));
        k1min = std::min(k1min, k.x);
        k1max = std::max(k1max, k.x);
        k2min = std::min(k2min, k.y);
        k2max = std::max(k2max, k.y);
    }
    SampleSet out;
    out.lattice = lattice;
    const double ex = 1e-9 * std::max(std::abs(domain.hi.x), 1.0);
    const double ey = 1e-9 * std::max(std::abs(domain.hi.y), 1.0);
    for (long k1 = static_cast<long>(std::floor(k1min)) - 1;
         k1 <= static_cast<long>(std::ceil(k1max)) + 1; ++k1) {
        for (long k2 = static_cast<long>(std::floor(k2min)) - 1;
             k2 <= static_cast<long>(std::ceil(k2max)) + 1; ++k2) {
            Vec2 p = lattice.point(static_cast<int>(k1), static_cast<int>(k2));
            if (p.x >= domain.lo.x - ex && p.x < domain.hi.x - ex && p.y >= domain.lo.y - ey &&
                p.y < domain.hi.y - ey) {
                out.indices.emplace_back(static_cast<int>(k1), static_cast<int>(k2));
                out.values.push_back(eval(p));
            }
        }
    }
    return out;
}

}  // namespace

SampleSet sample(const Grid2D& source, const Lattice2D& lattice, Rect domain) {
    return sample_impl([&source](Vec2 p) { return source.interp(p); }, lattice, domain);
}

SampleSet sample(const std::function<double(Vec2)>& f, const Lattice2D& lattice, Rect domain) {
    return sample_impl(f, lattice, domain);
}

Grid2D reconstruct(const SampleSet& samples, const WindowSpec& window, const Grid2D& target) {
    Grid2D out = make_grid(target.origin, target.extent, target.nx, target.ny, target.h);
    if (samples.indices.empty()) return out;

    // Dense sample table over the index bounding box (missing entries = 0).
    int k1min = samples.indices[0].first, k1max = k1min;
    int k2min = samples.indices[0].second, k2max = k2min;
    for (auto [a, b] : samples.indices) {
        k1min = std::min(k1min, a);
        k1max = std::max(k1max, a);
        k2min = std::min(k2min, b);
        k2max = std::max(k2max, b);
    }
    int n1 = k1max - k1min + 1, n2 = k2max - k2min + 1;
    std::vector<double> table(static_cast<std::size_t>(n1) * n2, 0.0);
    for (std::size_t i = 0; i < samples.indices.size(); ++i) {
        auto [a, b] = samples.indices[i];
        table[static_cast<std::size_t>(a - k1min) * n2 + (b - k2min)] = samples.values[i];
    }

    const Lattice2D& lat = samples.lattice;
    const double sh = lat.s * lat.h;
    const Mat2 Winv = lat.W.inverse();
    const int radius = window.truncation_radius();
    const bool diagonal = lat.W.m[0][1] == 0.0 && lat.W.m[1][0] == 0.0;

    if (diagonal) {
        // Separable fast path: lattice coordinates of the target pixels form a
        // tensor grid, so interpolate axis 1 then axis 2.
        std::vector<double> y1(out.nx), y2(out.ny);
        for (int i = 0; i < out.nx; ++i)
            y1[i] = (out.origin.x + i * out.dx() - lat.offset.x) / (sh * lat.W.m[0][0]) - k1min;
        for (int j = 0; j < out.ny; ++j)
            y2[j] = (out.origin.y + j * out.dy() - lat.offset.y) / (sh * lat.W.m[1][1]) - k2min;

        std::vector<double> mid(static_cast<std::size_t>(out.nx) * n2, 0.0);
        for (int i = 0; i < out.nx; ++i) {
            int lo = std::max(0, static_cast<int>(std::ceil(y1[i])) - radius);
            int hi = std::min(n1 - 1, static_cast<int>(std::floor(y1[i])) + radius);
            for (int a = lo; a <= hi; ++a) {
                double w = window.kernel(kPi * (y1[i] - a));
                if (w == 0.0) continue;
                const double* src = &table[static_cast<std::size_t>(a) * n2];
                double* dst = &mid[static_cast<std::size_t>(i) * n2];
                for (int b = 0; b < n2; ++b) dst[b] += w * src[b];
            }
        }
        for (int i = 0; i < out.nx; ++i) {
            const double* src = &mid[static_cast<std::size_t>(i) * n2];
            for (int j = 0; j < out.ny; ++j) {
                int lo = std::max(0, static_cast<int>(std::ceil(y2[j])) - radius);
                int hi = std::min(n2 - 1, static_cast<int>(std::floor(y2[j])) + radius);
                double acc = 0.0;
                for (int b = lo; b <= hi; ++b) acc += window.kernel(kPi * (y2[j] - b)) * src[b];
                out.at(i, j) = acc;
            }
        }
        return out;
    }

    // General lattice: truncated direct sum in lattice index space.
    int rad = std::min(radius, std::max(n1, n2));
    for (int i = 0; i < out.nx; ++i) {
        for (int j = 0; j < out.ny; ++j) {
            Vec2 x = out.point(i, j);
            Vec2 y = Winv * ((x - lat.offset) * (1.0 / sh));
            double yy1 = y.x - k1min, yy2 = y.y - k2min;
            int a_lo = std::max(0, static_cast<int>(std::ceil(yy1)) - rad);
            int a_hi = std::min(n1 - 1, static_cast<int>(std::floor(yy1)) + rad);
            int b_lo = std::max(0, static_cast<int>(std::ceil(yy2)) - rad);
            int b_hi = std::min(n2 - 1, static_cast<int>(std::floor(yy2)) + rad);
            double acc = 0.0;
            for (int a = a_lo; a <= a_hi; ++a) {
                double w1 = window.kernel(kPi * (yy1 - a));
                if (w1 == 0.0) continue;
                const double* src = &table[static_cast<std::size_t>(a) * n2];
                for (int b = b_lo; b <= b_hi; ++b)
                    acc += w1 * window.kernel(kPi * (yy2 - b)) * src[b];
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

double parseval_residual(const SampleSet& samples, double reference_norm) {
    double sum = 0.0;
    for (double v : samples.values) sum += v * v;
    double sh = samples.lattice.s * samples.lattice.h;
    sum *= std::abs(samples.lattice.W.det()) * sh * sh;
    if (reference_norm == 0.0) {
        if (sum == 0.0) return 0.0;
        throw std::invalid_argument("parseval_residual: zero reference norm with nonzero samples");
    }
    double lhs = reference_norm * reference_norm;
    return std::abs(lhs - sum) / lhs;
}

Spectrum2D fold_spectrum(const Spectrum2D& spec, Vec2 s, const WindowSpec& window) {
    if (s.x <= 0.0 || s.y <= 0.0) throw std::invalid_argument("fold_spectrum: s must be positive");
    // Reciprocal shift 2*pi/s_j in xi, converted to whole frequency bins.
    // Non-integer bin counts are rounded: the discrete model only represents
    // subsampling by grid-commensurate rates exactly.
    int bx = std::max(1, static_cast<int>(std::lround(kTwoPi / s.x / spec.xi_step.x)));
    int by = std::max(1, static_cast<int>(std::lround(kTwoPi / s.y / spec.xi_step.y)));

    Spectrum2D out = spec;
    std::fill(out.coefficients.begin(), out.coefficients.end(), std::complex<double>(0.0));
    // Accumulate every node onto its folded representative nearest zero.
    for (int i = 0; i < spec.nx; ++i) {
        int kx = i - spec.nx / 2;
        long fx = kx % bx;
        if (fx > bx / 2) fx -= bx;
        if (fx <= -(bx - bx / 2)) fx += bx;
        int ti = static_cast<int>(fx) + spec.nx / 2;
        for (int j = 0; j < spec.ny; ++j) {
            int ky = j - spec.ny / 2;
            long fy = ky % by;
            if (fy > by / 2) fy -= by;
            if (fy <= -(by - by / 2)) fy += by;
            int tj = static_cast<int>(fy) + spec.ny / 2;
            if (ti >= 0 && ti < spec.nx && tj >= 0 && tj < spec.ny)
                out.at(ti, tj) += spec.at(i, j);
        }
    }
    // Window transfer function in the folded (Nyquist) box.
    for (int i = 0; i < out.nx; ++i) {
        for (int j = 0; j < out.ny; ++j) {
            Vec2 xi = out.xi(i, j);
            out.at(i, j) *= window.chi_hat(s.x * xi.x / kPi) * window.chi_hat(s.y * xi.y / kPi);
        }
    }
    return out;
}

Vec2 alias_shift(Vec2 xi, int k1, int k2, Vec2 s) {
    return {xi.x + kTwoPi * k1 / s.x, xi.y + kTwoPi * k2 / s.y};
}

double weyl_count(double volume_phase, double h) {
    if (volume_phase < 0.0) throw std::invalid_argument("weyl_count: negative volume");
    if (h <= 0.0) throw std::invalid_argument("weyl_count: h must be positive");
    return volume_phase / (kTwoPi * h) / (kTwoPi * h);
}

long lattice_point_count(const Lattice2D& lattice, Rect domain) {
    long count = 0;
    auto nop = [](Vec2) { return 0.0; };
    SampleSet set = sample_impl(nop, lattice, domain);
    count = static_cast<long>(set.indices.size());
    return count;
}

}  // namespace mt
