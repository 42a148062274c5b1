#pragma once

#include <string>

#include "json.hpp"
#include "mt/radon_fanbeam.hpp"
#include "mt/radon_parallel.hpp"
#include "mt/tat.hpp"

namespace mt {

// Binary containers (little-endian). All share the grid layout
// {magic, u32 n1, u32 n2, f64 origin, f64 extent, f64 h, payload f64 row-major};
// sinogram and trace files append their axes metadata between h and the
// payload. Magics: MTG1 grid, MTS1 parallel sinogram, MTF1 fan sinogram,
// MTT1 boundary trace.

void write_grid(const std::string& path, const Grid2D& g);
Grid2D read_grid(const std::string& path);

void write_parallel_sinogram(const std::string& path, const ParallelSinogram& s);
ParallelSinogram read_parallel_sinogram(const std::string& path);

void write_fan_sinogram(const std::string& path, const FanSinogram& s);
FanSinogram read_fan_sinogram(const std::string& path);

void write_trace(const std::string& path, const BoundaryTrace& t);
BoundaryTrace read_trace(const std::string& path);

/// One CSV row per grid row, '.' decimal point regardless of locale.
void write_csv(const std::string& path, const Grid2D& g);

/// Columns k1, k2, x1, x2, value.
void write_sample_csv(const std::string& path, const SampleSet& s);

/// 16-bit grayscale PNG with linear min-max scaling; the min/max pair goes to
/// a sidecar JSON at path + ".json".
void write_png16(const std::string& path, const Grid2D& g);

nlohmann::json lattice_to_json(const Lattice2D& l);
Lattice2D lattice_from_json(const nlohmann::json& j);

}  // namespace mt
