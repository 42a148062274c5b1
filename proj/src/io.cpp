#include "mt/io.hpp"

#include <png.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "binary formats are written natively on little-endian hosts");

namespace mt {

namespace {

void put_u32(std::ofstream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::ifstream& is) {
    std::uint32_t v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
double get_f64(std::ifstream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path, const char* magic) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0)
        throw std::runtime_error(path + ": bad magic, expected " + magic);
    return is;
}

void put_grid_header(std::ofstream& os, const Grid2D& g) {
    put_u32(os, static_cast<std::uint32_t>(g.nx));
    put_u32(os, static_cast<std::uint32_t>(g.ny));
    put_f64(os, g.origin.x);
    put_f64(os, g.origin.y);
    put_f64(os, g.extent.x);
    put_f64(os, g.extent.y);
    put_f64(os, g.h);
}

void put_values(std::ofstream& os, const std::vector<double>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!os) throw std::runtime_error("short write");
}

std::vector<double> get_values(std::ifstream& is, std::size_t n) {
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("truncated payload");
    return v;
}

}  // namespace

void write_grid(const std::string& path, const Grid2D& g) {
    auto os = open_out(path);
    os.write("MTG1", 4);
    put_grid_header(os, g);
    put_values(os, g.values);
}

Grid2D read_grid(const std::string& path) {
    auto is = open_in(path, "MTG1");
    std::uint32_t nx = get_u32(is), ny = get_u32(is);
    Vec2 origin{get_f64(is), get_f64(is)};
    Vec2 extent{get_f64(is), get_f64(is)};
    double h = get_f64(is);
    Grid2D g = make_grid(origin, extent, static_cast<int>(nx), static_cast<int>(ny), h);
    g.values = get_values(is, static_cast<std::size_t>(nx) * ny);
    return g;
}

void write_parallel_sinogram(const std::string& path, const ParallelSinogram& s) {
    auto os = open_out(path);
    os.write("MTS1", 4);
    put_grid_header(os, s.as_grid());
    put_f64(os, 0.0);  // phi_min
    put_u32(os, static_cast<std::uint32_t>(s.phi_count));
    put_f64(os, s.p_min);
    put_f64(os, s.p_max);
    put_u32(os, static_cast<std::uint32_t>(s.p_count));
    put_f64(os, s.R);
    put_u32(os, s.weighted ? 1 : 0);
    put_values(os, s.values);
}

ParallelSinogram read_parallel_sinogram(const std::string& path) {
    auto is = open_in(path, "MTS1");
    get_u32(is);
    get_u32(is);
    for (int i = 0; i < 4; ++i) get_f64(is);
    double h = get_f64(is);
    get_f64(is);  // phi_min, fixed 0
    std::uint32_t phi_count = get_u32(is);
    double p_min = get_f64(is), p_max = get_f64(is);
    std::uint32_t p_count = get_u32(is);
    double R = get_f64(is);
    bool weighted = get_u32(is) != 0;
    ParallelSinogram s =
        make_parallel_sinogram(static_cast<int>(phi_count), static_cast<int>(p_count), p_max, R, h);
    s.p_min = p_min;
    s.weighted = weighted;
    s.values = get_values(is, static_cast<std::size_t>(phi_count) * p_count);
    return s;
}

void write_fan_sinogram(const std::string& path, const FanSinogram& s) {
    auto os = open_out(path);
    os.write("MTF1", 4);
    put_grid_header(os, s.as_grid());
    put_u32(os, static_cast<std::uint32_t>(s.alpha_count));
    put_u32(os, static_cast<std::uint32_t>(s.beta_count));
    put_f64(os, s.R);
    put_u32(os, s.weighted ? 1 : 0);
    put_values(os, s.values);
}

FanSinogram read_fan_sinogram(const std::string& path) {
    auto is = open_in(path, "MTF1");
    get_u32(is);
    get_u32(is);
    for (int i = 0; i < 4; ++i) get_f64(is);
    double h = get_f64(is);
    std::uint32_t alpha_count = get_u32(is), beta_count = get_u32(is);
    double R = get_f64(is);
    bool weighted = get_u32(is) != 0;
    FanSinogram s =
        make_fan_sinogram(static_cast<int>(alpha_count), static_cast<int>(beta_count), R, h);
    s.weighted = weighted;
    s.values = get_values(is, static_cast<std::size_t>(alpha_count) * beta_count);
    return s;
}

void write_trace(const std::string& path, const BoundaryTrace& t) {
    auto os = open_out(path);
    os.write("MTT1", 4);
    put_grid_header(os, t.as_grid());
    put_u32(os, static_cast<std::uint32_t>(t.t_count));
    put_u32(os, static_cast<std::uint32_t>(t.y_count));
    put_f64(os, t.T);
    put_f64(os, t.seg_a.x);
    put_f64(os, t.seg_a.y);
    put_f64(os, t.seg_b.x);
    put_f64(os, t.seg_b.y);
    put_values(os, t.values);
}

BoundaryTrace read_trace(const std::string& path) {
    auto is = open_in(path, "MTT1");
    get_u32(is);
    get_u32(is);
    for (int i = 0; i < 4; ++i) get_f64(is);
    double h = get_f64(is);
    BoundaryTrace t;
    t.t_count = static_cast<int>(get_u32(is));
    t.y_count = static_cast<int>(get_u32(is));
    t.T = get_f64(is);
    t.seg_a = {get_f64(is), get_f64(is)};
    t.seg_b = {get_f64(is), get_f64(is)};
    t.h = h;
    t.values = get_values(is, static_cast<std::size_t>(t.t_count) * t.y_count);
    return t;
}

void write_csv(const std::string& path, const Grid2D& g) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    char buf[40];
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", g.at(i, j));
            std::fputs(buf, fp);
            std::fputc(j + 1 == g.ny ? '\n' : ',', fp);
        }
    }
    std::fclose(fp);
}

void write_sample_csv(const std::string& path, const SampleSet& s) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    std::fputs("k1,k2,x1,x2,value\n", fp);
    for (std::size_t i = 0; i < s.indices.size(); ++i) {
        auto [k1, k2] = s.indices[i];
        Vec2 p = s.lattice.point(k1, k2);
        std::fprintf(fp, "%d,%d,%.17g,%.17g,%.17g\n", k1, k2, p.x, p.y, s.values[i]);
    }
    std::fclose(fp);
}

void write_png16(const std::string& path, const Grid2D& g) {
    double lo = g.values.empty() ? 0.0 : g.values[0], hi = lo;
    for (double v : g.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi > lo ? hi - lo : 1.0;

    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("png write failed: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, g.nx, g.ny, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint16_t> row(g.nx);
    for (int j = g.ny - 1; j >= 0; --j) {  // top image row = largest y
        for (int i = 0; i < g.nx; ++i) {
            double t = (g.at(i, j) - lo) / span;
            std::uint16_t v = static_cast<std::uint16_t>(t * 65535.0 + 0.5);
            row[i] = static_cast<std::uint16_t>((v >> 8) | (v << 8));  // PNG is big-endian
        }
        png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);

    nlohmann::json side{{"min", lo}, {"max", hi}};
    std::ofstream js(path + ".json");
    js << side.dump(2) << "\n";
}

nlohmann::json lattice_to_json(const Lattice2D& l) {
    return {{"W", {{l.W.m[0][0], l.W.m[0][1]}, {l.W.m[1][0], l.W.m[1][1]}}},
            {"s", l.s},
            {"h", l.h},
            {"offset", {l.offset.x, l.offset.y}}};
}

Lattice2D lattice_from_json(const nlohmann::json& j) {
    Lattice2D l;
    auto W = j.at("W");
    l.W.m[0][0] = W.at(0).at(0);
    l.W.m[0][1] = W.at(0).at(1);
    l.W.m[1][0] = W.at(1).at(0);
    l.W.m[1][1] = W.at(1).at(1);
    l.s = j.at("s");
    l.h = j.at("h");
    if (j.contains("offset")) l.offset = {j.at("offset").at(0), j.at("offset").at(1)};
    return l;
}

}  // namespace mt
