// Command-line front end: phantom rendering, lattice sampling and
// reconstruction, parallel and fan-beam transforms, aliasing and averaging
// demos, sampling planners, and the wave/boundary-trace demonstrator.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mt/io.hpp"
#include "mt/radon_fanbeam.hpp"
#include "mt/radon_parallel.hpp"
#include "mt/tat.hpp"

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    json config = json::object();
    std::string out = ".";
    std::uint64_t seed = 0;
    double h = 0.01;
    std::string format = "png";
};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(key + ": expected a number");
    return j.at(key).get<double>();
}

int integer(const json& j, const std::string& key, int fallback) {
    double v = num(j, key, fallback);
    if (v != std::floor(v)) throw ConfigError(key + ": expected an integer");
    return static_cast<int>(v);
}

mt::Vec2 vec(const json& j, const std::string& key, mt::Vec2 fallback) {
    if (!j.contains(key)) return fallback;
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2) throw ConfigError(key + ": expected [x, y]");
    return {a.at(0).get<double>(), a.at(1).get<double>()};
}

mt::PhantomSpec phantom_from_config(const json& c, std::uint64_t seed) {
    check_keys(c, {"type", "x0", "xi0", "centers", "widths", "amplitudes", "center", "direction",
                   "wavelength", "rows", "cols", "ring_radius", "support_radius", "count",
                   "width"},
               "phantom");
    std::string type = c.value("type", "coherent");
    double R = num(c, "support_radius", 1.0);
    if (type == "coherent")
        return mt::PhantomSpec::coherent(vec(c, "x0", {0, 0}), vec(c, "xi0", {0, 1}), R);
    if (type == "oscillatory")
        return mt::PhantomSpec::oscillatory(vec(c, "center", {0.3, 0}), vec(c, "direction", {1, 0}),
                                            num(c, "wavelength", 0.02), R);
    if (type == "doughnuts")
        return mt::PhantomSpec::doughnuts(integer(c, "rows", 5), integer(c, "cols", 5),
                                          num(c, "ring_radius", 0.05), R);
    if (type == "gaussians") {
        std::vector<mt::Vec2> centers;
        for (const auto& p : c.at("centers")) centers.push_back({p.at(0), p.at(1)});
        std::vector<double> widths = c.at("widths").get<std::vector<double>>();
        std::vector<double> amps = c.at("amplitudes").get<std::vector<double>>();
        return mt::PhantomSpec::gaussians(std::move(centers), std::move(widths), std::move(amps),
                                          R);
    }
    if (type == "random_gaussians") {
        // Seeded generator: uniform centers in the 0.7 R disk, fixed width.
        int count = integer(c, "count", 6);
        double w = num(c, "width", 0.08);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.7 * R, 0.7 * R);
        std::vector<mt::Vec2> centers;
        while (static_cast<int>(centers.size()) < count) {
            mt::Vec2 p{u(rng), u(rng)};
            if (p.norm() <= 0.7 * R) centers.push_back(p);
        }
        std::vector<double> widths(count, w), amps(count, 1.0);
        return mt::PhantomSpec::gaussians(std::move(centers), std::move(widths), std::move(amps),
                                          R);
    }
    throw ConfigError("phantom.type: unknown '" + type + "'");
}

mt::Grid2D grid_geometry(const json& c, double h, int default_n = 256) {
    int n = integer(c, "n", default_n);
    mt::Vec2 extent = vec(c, "extent", {2.4, 2.4});
    mt::Vec2 origin = vec(c, "origin", {-extent.x / 2, -extent.y / 2});
    return mt::make_grid(origin, extent, n, n, h);
}

mt::WindowSpec window_from_config(const json& c) {
    if (!c.contains("window")) return mt::WindowSpec::trapezoid(0.8);
    const json& w = c.at("window");
    check_keys(w, {"kind", "delta", "a"}, "window");
    std::string kind = w.value("kind", "trapezoid");
    if (kind == "sinc") return mt::WindowSpec::sinc();
    if (kind == "trapezoid") return mt::WindowSpec::trapezoid(num(w, "delta", 0.8));
    if (kind == "lanczos") return mt::WindowSpec::lanczos(integer(w, "a", 3));
    throw ConfigError("window.kind: unknown '" + kind + "'");
}

void write_image(const Options& opt, const std::string& name, const mt::Grid2D& g) {
    std::string base = opt.out + "/" + name;
    if (opt.format == "png")
        mt::write_png16(base + ".png", g);
    else if (opt.format == "csv")
        mt::write_csv(base + ".csv", g);
    else if (opt.format == "bin")
        mt::write_grid(base + ".bin", g);
    else
        throw ConfigError("format: must be png, csv or bin");
}

void write_report(const Options& opt, const std::string& name, const json& report) {
    std::ofstream os(opt.out + "/" + name);
    os << report.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

int cmd_phantom(const Options& opt) {
    check_keys(opt.config, {"phantom", "n", "extent", "origin"}, "config");
    mt::Grid2D geo = grid_geometry(opt.config, opt.h);
    mt::PhantomSpec spec = phantom_from_config(opt.config.value("phantom", json::object()),
                                               opt.seed);
    mt::Grid2D g = mt::render_phantom(spec, geo);
    write_image(opt, "phantom", g);
    write_report(opt, "phantom.json",
                 {{"l2_norm", g.l2_norm()},
                  {"boundary_mass_fraction", mt::boundary_mass_fraction(g)},
                  {"h", opt.h}});
    return 0;
}

mt::Lattice2D lattice_from_config(const json& c, double h) {
    if (c.contains("lattice")) return mt::lattice_from_json(c.at("lattice"));
    double B = num(c, "B", 1.0);
    double s = num(c, "s", 1.0);
    mt::Lattice2D l;
    l.W = mt::Mat2::diag(mt::kPi / B, mt::kPi / B);
    l.s = s;
    l.h = h;
    return l;
}

int cmd_sample(const Options& opt) {
    check_keys(opt.config, {"phantom", "n", "extent", "origin", "lattice", "B", "s", "domain"},
               "config");
    mt::PhantomSpec spec = phantom_from_config(opt.config.value("phantom", json::object()),
                                               opt.seed);
    mt::Lattice2D lat = lattice_from_config(opt.config, opt.h);
    mt::Vec2 dl = vec(opt.config, "domain", {1.2, 1.2});
    mt::Rect domain{{-dl.x, -dl.y}, {dl.x, dl.y}};
    double h = opt.h;
    mt::SampleSet set = mt::sample(
        [&spec, h](mt::Vec2 x) { return spec.evaluate(x, h); }, lat, domain);
    mt::write_sample_csv(opt.out + "/samples.csv", set);
    write_report(opt, "lattice.json", mt::lattice_to_json(lat));
    return 0;
}

int cmd_reconstruct(const Options& opt) {
    check_keys(opt.config,
               {"phantom", "n", "extent", "origin", "lattice", "B", "s", "domain", "window"},
               "config");
    mt::PhantomSpec spec = phantom_from_config(opt.config.value("phantom", json::object()),
                                               opt.seed);
    mt::Lattice2D lat = lattice_from_config(opt.config, opt.h);
    mt::Vec2 dl = vec(opt.config, "domain", {1.2, 1.2});
    mt::Rect domain{{-dl.x, -dl.y}, {dl.x, dl.y}};
    double h = opt.h;
    mt::SampleSet set = mt::sample(
        [&spec, h](mt::Vec2 x) { return spec.evaluate(x, h); }, lat, domain);
    mt::Grid2D target = grid_geometry(opt.config, opt.h);
    mt::Grid2D rec = mt::reconstruct(set, window_from_config(opt.config), target);
    mt::Grid2D ref = mt::render_phantom(spec, target);
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t m = 0; m < rec.values.size(); ++m) {
        double d = rec.values[m] - ref.values[m];
        err2 += d * d;
        ref2 += ref.values[m] * ref.values[m];
    }
    double rel = ref2 > 0 ? std::sqrt(err2 / ref2) : 0.0;
    write_image(opt, "reconstruction", rec);
    write_image(opt, "reference", ref);
    write_report(opt, "reconstruct.json",
                 {{"relative_l2_error", rel},
                  {"parseval_residual", mt::parseval_residual(set, ref.l2_norm())},
                  {"sample_count", set.values.size()}});
    return 0;
}

int cmd_radon_parallel(const Options& opt) {
    check_keys(opt.config,
               {"phantom", "n", "extent", "origin", "phi_count", "p_count", "p_max", "R",
                "window", "invert"},
               "config");
    mt::PhantomSpec spec = phantom_from_config(opt.config.value("phantom", json::object()),
                                               opt.seed);
    mt::Grid2D f = mt::render_phantom(spec, grid_geometry(opt.config, opt.h));
    double R = num(opt.config, "R", 1.0);
    auto geo = mt::make_parallel_sinogram(integer(opt.config, "phi_count", 360),
                                          integer(opt.config, "p_count", 256),
                                          num(opt.config, "p_max", 1.0), R, opt.h);
    mt::ParallelSinogram sino = mt::forward(f, mt::WeightFn::unit(), geo);
    mt::write_parallel_sinogram(opt.out + "/sinogram.bin", sino);
    write_image(opt, "sinogram", sino.as_grid());
    if (opt.config.value("invert", true)) {
        mt::Grid2D rec = mt::fbp_invert(sino, window_from_config(opt.config), f);
        write_image(opt, "fbp", rec);
    }
    return 0;
}

int cmd_radon_fan(const Options& opt) {
    check_keys(opt.config,
               {"phantom", "n", "extent", "origin", "alpha_count", "beta_count", "R", "window",
                "alpha_range", "invert"},
               "config");
    mt::PhantomSpec spec = phantom_from_config(opt.config.value("phantom", json::object()),
                                               opt.seed);
    mt::Grid2D f = mt::render_phantom(spec, grid_geometry(opt.config, opt.h));
    double R = num(opt.config, "R", 1.5);
    auto geo = mt::make_fan_sinogram(integer(opt.config, "alpha_count", 720),
                                     integer(opt.config, "beta_count", 180), R, opt.h);
    double lo = 0.0, hi = mt::kTwoPi;
    if (opt.config.contains("alpha_range")) {
        lo = opt.config.at("alpha_range").at(0);
        hi = opt.config.at("alpha_range").at(1);
    }
    auto [fan, rec] = mt::fan_forward_and_fbp(f, geo, window_from_config(opt.config), f, lo, hi);
    mt::write_fan_sinogram(opt.out + "/fan_sinogram.bin", fan);
    write_image(opt, "fan_sinogram", fan.as_grid());
    if (opt.config.value("invert", true)) write_image(opt, "fan_fbp", rec);
    return 0;
}

// Spectral peak location (nearest bin) of the strongest coefficient with
// positive vertical frequency.
mt::Vec2 spectral_peak(const mt::Spectrum2D& spec) {
    double best = -1.0;
    mt::Vec2 at{0, 0};
    for (int i = 0; i < spec.nx; ++i) {
        for (int j = 0; j < spec.ny; ++j) {
            double m = std::abs(spec.at(i, j));
            if (m > best) {
                best = m;
                at = spec.xi(i, j);
            }
        }
    }
    return at;
}

int cmd_alias_demo(const Options& opt) {
    check_keys(opt.config, {"mode", "phantom", "n", "extent", "origin", "B", "s", "step_deg",
                            "window"},
               "config");
    std::string mode = opt.config.value("mode", "classical");
    json report;
    if (mode == "classical") {
        // Two coherent states, well separated in frequency; subsample and
        // compare spectral peaks against the reciprocal-lattice shift.
        double h = opt.h;
        double B = num(opt.config, "B", 1.0);
        int n_fine = 81, n_coarse = 41;
        mt::Grid2D fine = mt::make_grid({-2.0, -2.0}, {4.0, 4.0}, n_fine, n_fine, h);
        mt::PhantomSpec ph = mt::PhantomSpec::coherent({0, 0}, {0, 2.5 * B}, 2.0);
        mt::Grid2D f = mt::render_phantom(ph, fine);
        mt::Spectrum2D fs = mt::sc_fourier(f);
        mt::Vec2 peak_fine = spectral_peak(fs);
        // Subsample by factor 2 via the fold model at relative rate s = 1/2.
        mt::Spectrum2D folded = mt::fold_spectrum(fs, {2.0, 2.0}, mt::WindowSpec::sinc());
        mt::Vec2 peak_folded = spectral_peak(folded);
        report = {{"peak_fine", {peak_fine.x, peak_fine.y}},
                  {"peak_folded", {peak_folded.x, peak_folded.y}},
                  {"expected_shift", {0.0, -2.0 * B}},
                  {"xi_step", {fs.xi_step.x, fs.xi_step.y}}};
        write_image(opt, "alias_fine", f);
        mt::Grid2D coarse = mt::make_grid({-2.0, -2.0}, {4.0, 4.0}, n_coarse, n_coarse, h);
        mt::Grid2D sub = mt::make_grid(coarse.origin, coarse.extent, n_coarse, n_coarse, h);
        for (int i = 0; i < n_coarse; ++i)
            for (int j = 0; j < n_coarse; ++j) sub.at(i, j) = f.interp(sub.point(i, j));
        write_image(opt, "alias_coarse", sub);
    } else if (mode == "angular" || mode == "control") {
        double h = opt.h;
        mt::Vec2 x0 = vec(opt.config, "phantom", {0.7, 0.0});
        mt::Vec2 xi0{0.0, 1.0};
        mt::PhantomSpec ph = mt::PhantomSpec::coherent(x0, xi0, 1.0);
        mt::Grid2D geo = mt::make_grid({-1.1, -1.1}, {2.2, 2.2}, 512, 512, h);
        mt::Grid2D f = mt::render_phantom(ph, geo);
        double step_deg = mode == "angular" ? num(opt.config, "step_deg", 3.0) : 0.5;
        int phi_count = std::max(4, static_cast<int>(std::lround(360.0 / step_deg)));
        auto sgeo = mt::make_parallel_sinogram(phi_count, 512, 1.1, 1.0, h);
        mt::ParallelSinogram sino = mt::forward(f, mt::WeightFn::unit(), sgeo);
        mt::Grid2D target = mt::make_grid({-1.0, -1.0}, {2.0, 2.0}, 256, 256, h);
        mt::Grid2D rec = mt::fbp_invert(sino, mt::WindowSpec::trapezoid(0.8), target);
        mt::Grid2D env = mt::envelope(rec, xi0);
        mt::Vec2 centroid = mt::intensity_centroid(env);
        double s_phi = step_deg * mt::kPi / 180.0 / h;  // semiclassical rate
        json preds = json::array();
        for (int k = -2; k <= 2; ++k) {
            auto pts = mt::alias_artifact_predict(x0, xi0, s_phi, 1.0, k, mt::AliasKind::angular);
            for (const auto& p : pts)
                preds.push_back({{"k", k},
                                 {"sign", p.sign},
                                 {"x", {p.x.x, p.x.y}},
                                 {"xi", {p.xi.x, p.xi.y}}});
        }
        report = {{"mode", mode},
                  {"measured_centroid", {centroid.x, centroid.y}},
                  {"launch_point", {x0.x, x0.y}},
                  {"grid_spacing", target.dx()},
                  {"predicted", preds}};
        write_image(opt, "alias_recon", rec);
        write_image(opt, "alias_envelope", env);
    } else {
        throw ConfigError("alias-demo mode: unknown '" + mode + "'");
    }
    write_report(opt, "alias_report.json", report);
    return 0;
}

int cmd_resolution_diagram(const Options& opt) {
    check_keys(opt.config, {"R", "s_alpha", "s_beta", "points", "directions"}, "config");
    double R = num(opt.config, "R", 1.0);
    double s_alpha = num(opt.config, "s_alpha", mt::kPi / R);
    double s_beta = num(opt.config, "s_beta", s_alpha / 2.0);
    int ndir = integer(opt.config, "directions", 360);
    std::vector<mt::Vec2> pts;
    if (opt.config.contains("points")) {
        for (const auto& p : opt.config.at("points")) pts.push_back({p.at(0), p.at(1)});
    } else {
        for (double r : {0.0, 0.44, 0.88})
            for (int q = 0; q < (r == 0.0 ? 1 : 4); ++q)
                pts.push_back(mt::omega(q * mt::kPi / 2.0) * r * R);
    }
    std::FILE* fp = std::fopen((opt.out + "/resolution_diagram.csv").c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open resolution_diagram.csv");
    std::fputs("x1,x2,theta,r_intersection,r_union\n", fp);
    for (const auto& x : pts) {
        for (int d = 0; d < ndir; ++d) {
            double th = d * mt::kTwoPi / ndir;
            double ri =
                mt::resolution_diagram(x, s_alpha, s_beta, R, mt::DiagramMode::intersection, th);
            double ru = mt::resolution_diagram(x, s_alpha, s_beta, R, mt::DiagramMode::union_, th);
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x.x, x.y, th, ri, ru);
        }
    }
    std::fclose(fp);
    return 0;
}

int cmd_counts(const Options& opt) {
    check_keys(opt.config, {"R", "B"}, "config");
    double R = num(opt.config, "R", 1.0);
    double B = num(opt.config, "B", 1.0);
    double h = opt.h;

    double Nf = mt::weyl_count(mt::kPi * R * R * mt::kPi * B * B, h);  // disk x disk
    auto [s_phi, s_p] = mt::nyquist_rates(R, B);

    // Parallel rectangular grid over [0, 2 pi) x [-R, R).
    mt::Lattice2D rect;
    rect.W = mt::Mat2::diag(s_phi, s_p);
    rect.h = h;
    long par_rect = mt::lattice_point_count(rect, {{0.0, -R}, {mt::kTwoPi, R}});

    auto plan1 = mt::strip_sampling_plan(R, B, 1, h);
    long par_eff = mt::plan_point_count(plan1);
    json strip_counts = json::object();
    for (int k : {1, 2, 4, 8})
        strip_counts[std::to_string(k)] =
            mt::plan_point_count(mt::strip_sampling_plan(R, B, k, h));

    auto [s_a, s_b] = mt::nyquist_rates_fan(R, B);
    mt::Lattice2D fan_rect;
    fan_rect.W = mt::Mat2::diag(s_a, s_b);
    fan_rect.h = h;
    long fan_rect_count =
        mt::lattice_point_count(fan_rect, {{0.0, -mt::kPi / 2.0}, {mt::kTwoPi, mt::kPi / 2.0}});
    mt::Lattice2D fan_eff = mt::fan_efficient_lattice(R, B, h);
    long fan_eff_count =
        mt::lattice_point_count(fan_eff, {{0.0, -mt::kPi / 2.0}, {mt::kTwoPi, mt::kPi / 2.0}});

    double weyl = mt::weyl_count(4.0 * R * R * 4.0 * B * B, h);

    std::FILE* fp = std::fopen((opt.out + "/counts.csv").c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open counts.csv");
    std::fputs("quantity,value,ratio_name,ratio\n", fp);
    std::fprintf(fp, "N_f,%.17g,,\n", Nf);
    std::fprintf(fp, "parallel_rectangular,%ld,over_2Nf,%.17g\n", par_rect, par_rect / (2 * Nf));
    std::fprintf(fp, "parallel_efficient,%ld,over_2Nf,%.17g\n", par_eff, par_eff / (2 * Nf));
    for (int k : {1, 2, 4, 8})
        std::fprintf(fp, "strip_plan_k%d,%ld,,\n", k,
                     strip_counts[std::to_string(k)].get<long>());
    std::fprintf(fp, "fan_rectangular,%ld,over_parallel_rectangular,%.17g\n", fan_rect_count,
                 static_cast<double>(fan_rect_count) / par_rect);
    std::fprintf(fp, "fan_efficient,%ld,over_2Nf,%.17g\n", fan_eff_count, fan_eff_count / (2 * Nf));
    std::fprintf(fp, "weyl_box_bound,%.17g,,\n", weyl);
    std::fclose(fp);
    return 0;
}

int cmd_average_demo(const Options& opt) {
    check_keys(opt.config, {"mode", "a", "b", "n", "R"}, "config");
    std::string mode = opt.config.value("mode", "p");
    double h = opt.h;
    double R = num(opt.config, "R", 1.0);
    auto psi = [](double t) { return std::exp(-t); };

    // Near-point phantom at a probe location; measured kernel = blurred
    // reconstruction, predicted kernel = inverse transform of the symbol.
    mt::Vec2 x0 = mode == "p" ? mt::Vec2{0.0, 0.0} : mt::Vec2{0.62, 0.62};
    mt::PhantomSpec ph = mt::PhantomSpec::gaussians({x0}, {2.5 * h}, {1.0}, R);
    mt::Grid2D geo = mt::make_grid({-1.1, -1.1}, {2.2, 2.2}, 512, 512, h);
    mt::Grid2D f = mt::render_phantom(ph, geo);

    double a = num(opt.config, "a", 4.0);  // symbol scale, semiclassical units
    double b = num(opt.config, "b", 2.0);
    mt::Grid2D rec;
    std::function<double(mt::Vec2, mt::Vec2)> symbol;
    if (mode == "p") {
        auto sgeo = mt::make_parallel_sinogram(720, 512, 1.1, R, h);
        mt::ParallelSinogram sino = mt::forward(f, mt::WeightFn::unit(), sgeo);
        // Gaussian blur exp(-a p_hat^2) applied along p.
        double sigma = std::sqrt(2.0 * a) * h;  // spatial std of the blur
        int m = static_cast<int>(std::ceil(4.0 * sigma / sino.dp()));
        std::vector<double> kern(2 * m + 1);
        double ksum = 0.0;
        for (int q = -m; q <= m; ++q) {
            double t = q * sino.dp();
            kern[q + m] = std::exp(-t * t / (2.0 * sigma * sigma));
            ksum += kern[q + m];
        }
        for (double& v : kern) v /= ksum;
        mt::ParallelSinogram blurred = sino;
        for (int i = 0; i < sino.phi_count; ++i)
            for (int j = 0; j < sino.p_count; ++j) {
                double acc = 0.0;
                for (int q = -m; q <= m; ++q) {
                    int jj = std::clamp(j + q, 0, sino.p_count - 1);
                    acc += kern[q + m] * sino.at(i, jj);
                }
                blurred.at(i, j) = acc;
            }
        mt::Grid2D target = mt::make_grid({x0.x - 0.25, x0.y - 0.25}, {0.5, 0.5}, 128, 128, h);
        rec = mt::fbp_invert(blurred, mt::WindowSpec::trapezoid(0.8), target);
        symbol = mt::averaged_symbol(a, 0.0, psi);
    } else if (mode == "beta" || mode == "alpha") {
        auto fgeo = mt::make_fan_sinogram(1440, 360, 1.5 * R, h);
        mt::FanSinogram fan = mt::fan_forward(f, mt::WeightFn::unit(), fgeo);
        double step = mode == "beta" ? fan.dbeta() : fan.dalpha();
        double sigma = std::sqrt(2.0 * b) * h;
        int m = std::max(1, static_cast<int>(std::ceil(4.0 * sigma / step)));
        std::vector<double> kern(2 * m + 1);
        double ksum = 0.0;
        for (int q = -m; q <= m; ++q) {
            double t = q * step;
            kern[q + m] = std::exp(-t * t / (2.0 * sigma * sigma));
            ksum += kern[q + m];
        }
        for (double& v : kern) v /= ksum;
        mt::FanSinogram blurred = fan;
        for (int i = 0; i < fan.alpha_count; ++i)
            for (int j = 0; j < fan.beta_count; ++j) {
                double acc = 0.0;
                for (int q = -m; q <= m; ++q) {
                    if (mode == "beta") {
                        int jj = std::clamp(j + q, 0, fan.beta_count - 1);
                        acc += kern[q + m] * fan.at(i, jj);
                    } else {
                        int ii = (i + q % fan.alpha_count + fan.alpha_count) % fan.alpha_count;
                        acc += kern[q + m] * fan.at(ii, j);
                    }
                }
                blurred.at(i, j) = acc;
            }
        mt::ParallelSinogram par = mt::rebin_to_parallel(blurred, 1440, 720);
        mt::Grid2D target = mt::make_grid({x0.x - 0.25, x0.y - 0.25}, {0.5, 0.5}, 128, 128, h);
        rec = mt::fbp_invert(par, mt::WindowSpec::trapezoid(0.8), target);
        symbol = mode == "beta" ? mt::blur_symbol_fan(0.0, b, psi, 1.5 * R)
                                : mt::blur_symbol_fan(b, 0.0, psi, 1.5 * R);
    } else {
        throw ConfigError("average-demo mode: must be p, alpha or beta");
    }

    // Predicted kernel: inverse transform of the symbol frozen at x0.
    mt::Grid2D pred = mt::make_grid(rec.origin, rec.extent, rec.nx, rec.ny, h);
    {
        mt::Spectrum2D spec = mt::sc_fourier(pred);
        for (int i = 0; i < spec.nx; ++i)
            for (int j = 0; j < spec.ny; ++j) spec.at(i, j) = symbol(x0, spec.xi(i, j));
        mt::Grid2D kern = mt::inverse_sc_fourier(spec);
        // inverse transform of a pure symbol is centered at the grid's zero
        // phase point; roll it to x0.
        int si = static_cast<int>(std::lround((x0.x - pred.origin.x) / pred.dx()));
        int sj = static_cast<int>(std::lround((x0.y - pred.origin.y) / pred.dy()));
        for (int i = 0; i < pred.nx; ++i)
            for (int j = 0; j < pred.ny; ++j)
                pred.at(i, j) = kern.at(((i - si) % pred.nx + pred.nx) % pred.nx,
                                        ((j - sj) % pred.ny + pred.ny) % pred.ny);
    }
    write_image(opt, "avg_measured", rec);
    write_image(opt, "avg_predicted", pred);

    // L2 comparison after peak normalization.
    auto peak = [](const mt::Grid2D& g) {
        double m = 0.0;
        for (double v : g.values) m = std::max(m, std::abs(v));
        return m > 0 ? m : 1.0;
    };
    double pm = peak(rec), pp = peak(pred);
    double d2 = 0.0, n2 = 0.0;
    for (std::size_t m2 = 0; m2 < rec.values.size(); ++m2) {
        double d = rec.values[m2] / pm - pred.values[m2] / pp;
        d2 += d * d;
        n2 += (pred.values[m2] / pp) * (pred.values[m2] / pp);
    }
    write_report(opt, "average_report.json",
                 {{"mode", mode}, {"l2_discrepancy", std::sqrt(d2 / n2)}});
    return 0;
}

int cmd_weyl(const Options& opt) {
    check_keys(opt.config, {"volume", "R", "B"}, "config");
    double vol;
    if (opt.config.contains("volume"))
        vol = num(opt.config, "volume", 0.0);
    else {
        double R = num(opt.config, "R", 1.0), B = num(opt.config, "B", 1.0);
        vol = 4.0 * R * R * 4.0 * B * B;
    }
    double n = mt::weyl_count(vol, opt.h);
    std::FILE* fp = std::fopen((opt.out + "/weyl.csv").c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open weyl.csv");
    std::fprintf(fp, "phase_volume,h,weyl_count\n%.17g,%.17g,%.17g\n", vol, opt.h, n);
    std::fclose(fp);
    std::printf("%.17g\n", n);
    return 0;
}

int cmd_tat_demo(const Options& opt) {
    check_keys(opt.config, {"n", "T", "wavelength", "B", "lenses"}, "config");
    double h = opt.h;
    int n = integer(opt.config, "n", 256);
    double T = num(opt.config, "T", 4.0);
    double wavelength = num(opt.config, "wavelength", 2.0 * h);

    // The oscillatory envelope decays like exp(-2|x|^2); the domain has to be
    // wide enough that the free-space solver sees negligible edge mass.
    mt::PhantomSpec ph = mt::PhantomSpec::oscillatory({0.3, 0.0}, {1.0, 0.0}, wavelength, 1.0);
    mt::Grid2D geo = mt::make_grid({-2.0, -2.0}, {4.0, 4.0}, n, n, h);
    mt::Grid2D f = mt::render_phantom(ph, geo);
    double f_max_freq = mt::max_frequency(mt::sc_fourier(f));
    double B = num(opt.config, "B", f_max_freq);

    json report;
    report["phantom_max_frequency"] = f_max_freq;
    for (double amp : {-0.5, 0.5}) {
        std::string name = amp < 0 ? "slow" : "fast";
        mt::SpeedField c = mt::SpeedField::lens(amp, 2.0 * std::sqrt(2.0));
        mt::WaveResult res = mt::solve_wave(f, c, mt::WaveModel::free_space, T, 0.45);
        mt::write_trace(opt.out + "/trace_" + name + ".bin", res.trace);
        write_image(opt, "trace_" + name, res.trace.as_grid());
        double frac = mt::cone_check(res.trace, B, c.M());
        double tr_max = mt::max_frequency(mt::trace_spectrum(res.trace));
        report[name] = {{"cone_fraction", frac},
                        {"trace_max_frequency", tr_max},
                        {"frequency_ratio", tr_max / f_max_freq}};
    }
    write_report(opt, "tat_report.json", report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling, tomography and wave-trace toolkit"};
    app.set_help_flag("--help", "print usage");  // frees -h/--h for the scale parameter
    app.require_subcommand(1);

    Options opt;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", opt.out, "output directory");
    app.add_option("--seed", opt.seed, "seed for randomized phantoms");
    app.add_option("--h", opt.h, "semiclassical parameter");
    app.add_option("--format", opt.format, "image format: png, csv or bin");

    std::map<std::string, int (*)(const Options&)> commands = {
        {"phantom", cmd_phantom},
        {"sample", cmd_sample},
        {"reconstruct", cmd_reconstruct},
        {"radon-parallel", cmd_radon_parallel},
        {"radon-fan", cmd_radon_fan},
        {"alias-demo", cmd_alias_demo},
        {"resolution-diagram", cmd_resolution_diagram},
        {"counts", cmd_counts},
        {"average-demo", cmd_average_demo},
        {"weyl", cmd_weyl},
        {"tat-demo", cmd_tat_demo},
    };
    for (auto& [name, fn] : commands) app.add_subcommand(name, "")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw ConfigError("cannot open config: " + config_path);
            opt.config = json::parse(is);
        }
        std::filesystem::create_directories(opt.out);
        std::string sub = app.get_subcommands().at(0)->get_name();
        return commands.at(sub)(opt);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
