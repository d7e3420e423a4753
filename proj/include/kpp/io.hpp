#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kpp/domain.hpp"
#include "kpp/reference.hpp"

namespace kpp {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raw grid file contents: header `nx ny dx`, then ny rows of nx values,
/// row 1 = northernmost.
struct GridData {
    GridSpec grid;
    std::vector<double> values;
};

GridData load_grid_file(const std::string& path);
void write_grid_file(const std::string& path, const GridSpec& grid,
                     std::span<const double> values);

/// Values must all be 0 or 1.
MapMask load_mask_file(const std::string& path);
CapacityFrame load_capacity_file(const std::string& path, double time = 0.0);
Field2D load_field_file(const std::string& path);

struct Snapshot {
    double time = 0.0;
    Field2D field;
};

/// Row-major CSV with a two-line header (names, then time/nx/ny/dx).
void write_snapshot_csv(const Snapshot& snap, const std::string& path);
Snapshot read_snapshot_csv(const std::string& path);

/// 8-bit ASCII PGM; gray = round(255 log(1+10u) / log 11).
void write_snapshot_pgm(const Snapshot& snap, const std::string& path);

/// CSV `t,x_half,velocity`; velocities are centered differences (one-sided
/// at the ends).
void write_front_trace(const FrontTrace& trace, const std::string& path);

/// Frame manifest: one `<time> <path>` line per capacity frame, times
/// strictly increasing. Paths are resolved relative to the manifest file.
std::vector<std::pair<double, std::string>> load_frame_manifest(const std::string& path);

/// Flat key=value run configuration. Fields left empty/NaN fall back to the
/// per-scenario defaults.
struct RunConfig {
    std::string scenario;
    double h = 0.0;
    double dx = 0.0;
    double beta = 4.0;
    double nu = 1.0;
    double fr = 0.01;
    int smooth_half_width = 0;  // 0 = smoothing off
    bool regularize = true;
    bool alternate_directions = true;
    bool smooth = false;
    double t_start = 0.0;
    double t_end = 0.0;
    double snapshot_every = 0.0;  // 0 = final snapshot only
    std::string out_dir = "out";
    std::string mask_path;
    std::string frames_path;    // frame manifest
    std::string capacity_path;  // single static capacity file
    std::string init_path;
    // Built-in initial condition generator.
    std::string init_shape;  // "gaussian", "disk", "point"
    double init_x = 0.0;
    double init_y = 0.0;
    double init_width = 3.0;
    double init_amplitude = 1.0;
    int nx = 0;
    int ny = 0;
    int threads = 1;

    void validate() const;
};

RunConfig load_config(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// 17-significant-digit text form used by every writer.
std::string format_double(double v);

}  // namespace kpp
