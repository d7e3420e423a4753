#pragma once

#include <string>
#include <vector>

#include "kpp/capacity.hpp"
#include "kpp/io.hpp"
#include "kpp/kernels.hpp"
#include "kpp/reference.hpp"

namespace kpp {

struct RunSummary {
    double t_final = 0.0;
    long steps = 0;
    double u_min = 0.0;
    double u_max = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
};

/// 1-D travelling wave (constant K = 1). Writes profile snapshots and the
/// half-height front trace.
struct Wave1DResult {
    RunSummary summary;
    std::vector<double> profile;        // final interior profile (unpadded)
    std::vector<double> x;              // node coordinates
    FrontTrace trace;
};
Wave1DResult run_wave1d(const RunConfig& cfg);

/// Rotationally symmetric 2-D test on a fully habitable square; compares the
/// final state against the radial reference solver.
struct Radial2DResult {
    RunSummary summary;
    Field2D field;
    RadialField reference;
    ErrorMetrics metrics;
};
Radial2DResult run_radial2d(const RunConfig& cfg);

/// Desert test: a low-capacity band crossed by a travelling front; tracks
/// the centerline half-height position against the local capacity level.
struct DesertResult {
    RunSummary summary;
    FrontTrace trace;
    double min_u = 0.0;        // most negative value seen over the whole run
    bool sign_change = false;  // any u < -1e-9 observed
};
DesertResult run_desert(const RunConfig& cfg);

/// Dispersal run on a masked map with (optionally time-interpolated)
/// capacity frames.
RunSummary run_map(const RunConfig& cfg);

/// Writes the row/column segmentation of a mask as CSV.
RunSummary run_segment_debug(const RunConfig& cfg);

/// Applies the low-pass filter to a capacity map and writes the result.
RunSummary run_smooth_map(const RunConfig& cfg);

/// Samples the sigmoid interpolation across a frame schedule.
RunSummary run_interp_preview(const RunConfig& cfg);

/// Dispatch by cfg.scenario; returns the summary of the executed scenario.
RunSummary run_scenario(const RunConfig& cfg);

/// Built-in initial condition generators (coordinates in grid units, cell i
/// at i*dx).
Field2D make_gaussian_bump(const GridSpec& grid, double cx, double cy, double rms,
                           double amplitude);
Field2D make_gaussian_strip(const GridSpec& grid, double cx, double rms,
                            double amplitude);
Field2D make_disk(const GridSpec& grid, double cx, double cy, double radius,
                  double amplitude);

/// Desert capacity profile: K = 1 outside [x_low, x_high], K = fr inside
/// (x measured from the grid center).
CapacityFrame make_desert_capacity(const GridSpec& grid, double fr, double x_low,
                                   double x_high);

}  // namespace kpp
