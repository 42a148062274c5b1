#include "mt/tat.hpp"

#include <cmath>
#include <stdexcept>

#include "mt/kernels.hpp"

namespace mt {

SpeedField SpeedField::constant(double c) {
    if (c <= 0.0) throw std::invalid_argument("SpeedField: c must be positive");
    SpeedField s;
    s.eval = [c](Vec2) { return c; };
    s.c_min = s.c_max = c;
    return s;
}

SpeedField SpeedField::lens(double amp, double radius) {
    if (1.0 + amp <= 0.0) throw std::invalid_argument("SpeedField: lens speed not positive");
    SpeedField s;
    s.eval = [amp](Vec2 x) { return 1.0 + amp * std::exp(-2.0 * dot(x, x)); };
    double at_center = 1.0 + amp;
    double at_edge = 1.0 + amp * std::exp(-2.0 * radius * radius);
    s.c_min = std::min(at_center, at_edge);
    s.c_max = std::max(at_center, at_edge);
    return s;
}

SpeedField SpeedField::custom(std::function<double(Vec2)> f, double c_min, double c_max) {
    if (c_min <= 0.0 || c_max < c_min) throw std::invalid_argument("SpeedField: bad bounds");
    SpeedField s;
    s.eval = std::move(f);
    s.c_min = c_min;
    s.c_max = c_max;
    return s;
}

Grid2D BoundaryTrace::as_grid() const {
    Grid2D g = make_grid({0.0, 0.0}, {T, seg_length() * y_count / std::max(y_count - 1, 1)},
                         t_count, y_count, h);
    g.values = values;
    return g;
}

namespace {

// Absorbing layer: u_tt + 2 sigma u_t = c^2 lap u with a cubic ramp of fixed
// physical depth, so refining the grid refines the same continuum problem.
constexpr double kSpongeDepth = 2.0;
constexpr double kSpongeSigmaMax = 20.0;

}  // namespace

WaveResult solve_wave(const Grid2D& f, const SpeedField& speed, WaveModel model, double T,
                      double cfl, int snapshot_stride) {
    if (cfl <= 0.0 || cfl > 0.5) throw std::invalid_argument("solve_wave: require 0 < cfl <= 0.5");
    if (std::abs(f.dx() - f.dy()) > 1e-12 * f.dx())
        throw std::invalid_argument("solve_wave: grid spacing must be square");
    // The absorbing layer is accurate to ~1e-3; initial data leaking more
    // than 1e-4 of its mass into the edge cells would dominate that budget.
    if (model == WaveModel::free_space && boundary_mass_fraction(f, 3) > 1e-4)
        throw std::invalid_argument("solve_wave: phantom touches the absorbing layer");

    // Node p = 0..nx lies at origin.x + p*dx, so the walls (and the recorded
    // boundary segment) sit exactly on the domain edge at every resolution.
    const int nx = f.nx, ny = f.ny;
    const double dx = f.dx();
    const int pad = model == WaveModel::free_space
                        ? static_cast<int>(std::ceil(kSpongeDepth / dx))
                        : 0;
    const int NX = nx + 1 + 2 * pad, NY = ny + 1 + 2 * pad;
    const int stride = NY + 2;  // +2 ghost columns
    auto idx = [stride](int I, int J) { return static_cast<std::size_t>(I) * stride + J; };

    double dt = cfl * dx / speed.c_max;
    int steps = std::max(1, static_cast<int>(std::ceil(T / dt)));
    dt = T / steps;

    // Stencil coefficient, sponge strength sigma*dt, and 1/(1 + sigma*dt).
    std::vector<double> k(static_cast<std::size_t>(NX + 2) * stride, 0.0);
    std::vector<double> sdt(k.size(), 0.0);
    std::vector<double> rinv(k.size(), 1.0);
    std::vector<double> c2inv(k.size(), 1.0);
    for (int I = 1; I <= NX; ++I) {
        for (int J = 1; J <= NY; ++J) {
            Vec2 x{f.origin.x + (I - 1 - pad) * dx, f.origin.y + (J - 1 - pad) * dx};
            double c = speed(x);
            double r = c * dt / dx;
            k[idx(I, J)] = r * r;
            c2inv[idx(I, J)] = 1.0 / (c * c);
            if (pad > 0) {
                int dI = std::max({0, pad + 1 - I, I - (NX - pad)});
                int dJ = std::max({0, pad + 1 - J, J - (NY - pad)});
                int d = std::max(dI, dJ);
                if (d > 0) {
                    double s = std::min(1.0, d * dx / kSpongeDepth);
                    double sigma = kSpongeSigmaMax / kSpongeDepth * s * s * s;
                    sdt[idx(I, J)] = sigma * dt;
                    rinv[idx(I, J)] = 1.0 / (1.0 + sigma * dt);
                }
            }
        }
    }

    std::vector<double> u(k.size(), 0.0), uprev(k.size(), 0.0), unext(k.size(), 0.0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) u[idx(pad + i + 1, pad + j + 1)] = f.at(i, j);

    auto set_ghosts = [&](std::vector<double>& w) {
        if (model == WaveModel::neumann_reflect) {
            for (int J = 1; J <= NY; ++J) {
                w[idx(0, J)] = w[idx(2, J)];
                w[idx(NX + 1, J)] = w[idx(NX - 1, J)];
            }
            for (int I = 0; I <= NX + 1; ++I) {
                w[idx(I, 0)] = w[idx(I, 2)];
                w[idx(I, NY + 1)] = w[idx(I, NY - 1)];
            }
        } else {
            // Dirichlet behind the sponge; the row kernel scribbles on the
            // ghost columns, so clear them every step.
            for (int J = 0; J <= NY + 1; ++J) {
                w[idx(0, J)] = 0.0;
                w[idx(NX + 1, J)] = 0.0;
            }
            for (int I = 0; I <= NX + 1; ++I) {
                w[idx(I, 0)] = 0.0;
                w[idx(I, NY + 1)] = 0.0;
            }
        }
    };

    WaveResult res;
    res.dt = dt;
    res.steps = steps;
    BoundaryTrace& tr = res.trace;
    tr.y_count = ny - 6;
    tr.t_count = steps + 1;
    tr.T = (steps + 1) * dt;
    tr.h = f.h;
    tr.seg_a = {f.origin.x + nx * dx, f.origin.y + 3 * dx};
    tr.seg_b = {f.origin.x + nx * dx, f.origin.y + (ny - 4) * dx};
    tr.values.assign(static_cast<std::size_t>(tr.t_count) * tr.y_count, 0.0);

    auto record = [&](int it, const std::vector<double>& w) {
        const int I = pad + nx + 1;  // right edge node
        for (int j = 0; j < tr.y_count; ++j) tr.at(it, j) = w[idx(I, pad + j + 4)];
    };
    auto snapshot = [&](const std::vector<double>& w) {
        Grid2D g = make_grid(f.origin, f.extent, nx, ny, f.h);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) g.at(i, j) = w[idx(pad + i + 1, pad + j + 1)];
        res.snapshots.push_back(std::move(g));
    };

    record(0, u);
    if (snapshot_stride > 0) snapshot(u);

    auto energy_of = [&](const std::vector<double>& wn, const std::vector<double>& wo) {
        // Staggered leapfrog invariant: half-step velocity against the
        // product of gradients at the two adjacent levels. Wall nodes carry
        // half weight (they are shared with the mirror image). Exactly
        // conserved by the reflecting scheme, up to roundoff.
        double e = 0.0;
        for (int I = 1; I <= NX; ++I) {
            double wI = (I == 1 || I == NX) ? 0.5 : 1.0;
            for (int J = 1; J <= NY; ++J) {
                double wJ = (J == 1 || J == NY) ? 0.5 : 1.0;
                double ut = (wn[idx(I, J)] - wo[idx(I, J)]) / dt;
                e += wI * wJ * ut * ut * c2inv[idx(I, J)];
                if (I < NX) {
                    double gn = (wn[idx(I + 1, J)] - wn[idx(I, J)]) / dx;
                    double go = (wo[idx(I + 1, J)] - wo[idx(I, J)]) / dx;
                    e += wJ * gn * go;
                }
                if (J < NY) {
                    double gn = (wn[idx(I, J + 1)] - wn[idx(I, J)]) / dx;
                    double go = (wo[idx(I, J + 1)] - wo[idx(I, J)]) / dx;
                    e += wI * gn * go;
                }
            }
        }
        return 0.5 * e * dx * dx;
    };

    // First step from u_t(0) = 0: u^1 = u^0 + k/2 * laplacian.
    set_ghosts(u);
    for (int I = 1; I <= NX; ++I) {
        for (int J = 1; J <= NY; ++J) {
            double lap = u[idx(I - 1, J)] + u[idx(I + 1, J)] + u[idx(I, J - 1)] +
                         u[idx(I, J + 1)] - 4.0 * u[idx(I, J)];
            unext[idx(I, J)] = u[idx(I, J)] + 0.5 * k[idx(I, J)] * lap;
        }
    }
    uprev.swap(u);
    u.swap(unext);
    record(1, u);
    if (snapshot_stride == 1) snapshot(u);

    for (int n = 2; n <= steps; ++n) {
        set_ghosts(u);
        for (int I = 1; I <= NX; ++I) {
            kernels::wave_row(stride, &u[idx(I, 0)], &u[idx(I + 1, 0)], &u[idx(I - 1, 0)],
                              &uprev[idx(I, 0)], &k[idx(I, 0)], &unext[idx(I, 0)]);
        }
        if (pad > 0) {
            for (std::size_t m = 0; m < unext.size(); ++m)
                unext[m] = (unext[m] + sdt[m] * uprev[m]) * rinv[m];
        }
        if (model == WaveModel::neumann_reflect) res.energy.push_back(energy_of(unext, u));
        uprev.swap(u);
        u.swap(unext);
        record(n, u);
        if (snapshot_stride > 0 && n % snapshot_stride == 0) snapshot(u);
    }
    return res;
}

namespace {

double tukey(double frac, double lo_taper, double hi_taper) {
    if (frac < lo_taper && lo_taper > 0.0)
        return 0.5 * (1.0 - std::cos(kPi * frac / lo_taper));
    if (frac > 1.0 - hi_taper && hi_taper > 0.0)
        return 0.5 * (1.0 - std::cos(kPi * (1.0 - frac) / hi_taper));
    return 1.0;
}

}  // namespace

Spectrum2D trace_spectrum(const BoundaryTrace& trace) {
    Grid2D g = trace.as_grid();
    for (int i = 0; i < g.nx; ++i) {
        double wt = tukey(static_cast<double>(i) / (g.nx - 1), 0.0, 0.1);
        for (int j = 0; j < g.ny; ++j) {
            double wy = tukey(static_cast<double>(j) / (g.ny - 1), 0.1, 0.1);
            g.at(i, j) *= wt * wy;
        }
    }
    return sc_fourier(g);
}

double cone_check(const BoundaryTrace& trace, double B, double M) {
    if (B <= 0.0 || M <= 0.0) throw std::invalid_argument("cone_check: B, M must be positive");
    Spectrum2D spec = trace_spectrum(trace);
    double cap = 1.1 * B / M;
    auto region = FrequencyRegion::custom([cap](Vec2 xi) {
        return std::abs(xi.y) <= 1.1 * std::abs(xi.x) && std::abs(xi.x) <= cap;
    });
    return energy_fraction_outside(spec, region);
}

std::pair<double, double> boundary_sampling_plan(double B, const SpeedField& speed, double h) {
    if (B <= 0.0 || h <= 0.0)
        throw std::invalid_argument("boundary_sampling_plan: B, h must be positive");
    double step = 0.9 * kPi * h * speed.M();
    return {step, step};
}

namespace {

struct RayState {
    Vec2 x;
    Vec2 xi;
};

Vec2 grad_c(const SpeedField& c, Vec2 x) {
    const double e = 1e-5;
    return {(c({x.x + e, x.y}) - c({x.x - e, x.y})) / (2.0 * e),
            (c({x.x, x.y + e}) - c({x.x, x.y - e})) / (2.0 * e)};
}

RayState deriv(const SpeedField& c, const RayState& s) {
    double r = s.xi.norm();
    Vec2 g = grad_c(c, s.x);
    return {{c(s.x) * s.xi.x / r, c(s.x) * s.xi.y / r}, {-r * g.x, -r * g.y}};
}

RayState rk4(const SpeedField& c, const RayState& s, double ds) {
    RayState k1 = deriv(c, s);
    RayState s2{{s.x.x + 0.5 * ds * k1.x.x, s.x.y + 0.5 * ds * k1.x.y},
                {s.xi.x + 0.5 * ds * k1.xi.x, s.xi.y + 0.5 * ds * k1.xi.y}};
    RayState k2 = deriv(c, s2);
    RayState s3{{s.x.x + 0.5 * ds * k2.x.x, s.x.y + 0.5 * ds * k2.x.y},
                {s.xi.x + 0.5 * ds * k2.xi.x, s.xi.y + 0.5 * ds * k2.xi.y}};
    RayState k3 = deriv(c, s3);
    RayState s4{{s.x.x + ds * k3.x.x, s.x.y + ds * k3.x.y},
                {s.xi.x + ds * k3.xi.x, s.xi.y + ds * k3.xi.y}};
    RayState k4 = deriv(c, s4);
    return {{s.x.x + ds / 6.0 * (k1.x.x + 2 * k2.x.x + 2 * k3.x.x + k4.x.x),
             s.x.y + ds / 6.0 * (k1.x.y + 2 * k2.x.y + 2 * k3.x.y + k4.x.y)},
            {s.xi.x + ds / 6.0 * (k1.xi.x + 2 * k2.xi.x + 2 * k3.xi.x + k4.xi.x),
             s.xi.y + ds / 6.0 * (k1.xi.y + 2 * k2.xi.y + 2 * k3.xi.y + k4.xi.y)}};
}

}  // namespace

RayExit trace_ray(Vec2 x0, Vec2 xi0, const SpeedField& speed, Rect domain) {
    if (xi0.norm() == 0.0) throw std::invalid_argument("trace_ray: xi0 = 0");
    if (!domain.contains(x0)) throw std::invalid_argument("trace_ray: launch point outside");

    const double diam = std::hypot(domain.width(), domain.height());
    const double cap = 20.0 * diam / speed.c_min;
    const double ds = 1e-3 * diam;

    RayState s{x0, xi0};
    double t = 0.0;
    auto inside = [&domain](Vec2 p) {
        return p.x > domain.lo.x && p.x < domain.hi.x && p.y > domain.lo.y && p.y < domain.hi.y;
    };
    while (true) {
        RayState next = rk4(speed, s, ds);
        if (!inside(next.x)) {
            // Bisect the step fraction until the crossing time is pinned.
            double lo = 0.0, hi = ds;
            RayState out = next;
            while (hi - lo > 1e-10) {
                double mid = 0.5 * (lo + hi);
                RayState m = rk4(speed, s, mid);
                if (inside(m.x))
                    lo = mid;
                else {
                    hi = mid;
                    out = m;
                }
            }
            RayExit e;
            e.s_plus = t + hi;
            e.y = out.x;
            e.xi_exit = out.xi;
            e.tau = -speed(x0) * xi0.norm();
            // Tangential direction of the edge the ray crossed.
            double dl = std::min({std::abs(out.x.x - domain.lo.x), std::abs(out.x.x - domain.hi.x),
                                  std::abs(out.x.y - domain.lo.y),
                                  std::abs(out.x.y - domain.hi.y)});
            bool vertical = dl == std::abs(out.x.x - domain.lo.x) ||
                            dl == std::abs(out.x.x - domain.hi.x);
            // Tangential momentum in the boundary metric induced by c^-2 g0,
            // so that |eta| < |tau| expresses non-tangential exit.
            e.eta = (vertical ? out.xi.y : out.xi.x) * speed(out.x);
            return e;
        }
        s = next;
        t += ds;
        if (t > cap) throw std::runtime_error("trace_ray: time cap exceeded (trapped ray?)");
    }
}

}  // namespace mt
