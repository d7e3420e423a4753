#include "kpp/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

namespace kpp {

namespace {

namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

long step_count(double t_start, double t_end, double h) {
    return std::max(1L, std::lround(std::ceil((t_end - t_start) / h - 1e-9)));
}

std::string snapshot_name(const std::string& stem, int index, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04d.%s", stem.c_str(), index, ext);
    return buf;
}

MapMask all_land_mask(const GridSpec& grid) {
    return {grid, std::vector<std::uint8_t>(grid.cells(), 1)};
}

// Half-height crossing against a spatially varying capacity level, scanned
// from the leading (largest-x) side. Interpolates on u - K/2.
std::optional<double> front_position_leveled(std::span<const double> u,
                                             std::span<const double> capacity,
                                             double dx) {
    for (std::size_t i = u.size() - 1; i-- > 0;) {
        const double d0 = u[i] - 0.5 * capacity[i];
        const double d1 = u[i + 1] - 0.5 * capacity[i + 1];
        if (d0 >= 0.0 && d1 < 0.0) {
            const double frac = d0 / (d0 - d1);
            return (double(i) + frac) * dx;
        }
    }
    return std::nullopt;
}

}  // namespace

Field2D make_gaussian_bump(const GridSpec& grid, double cx, double cy, double rms,
                           double amplitude) {
    Field2D f(grid);
    const double inv = 1.0 / (2.0 * rms * rms);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = i * grid.dx - cx;
            const double y = j * grid.dx - cy;
            f.at(i, j) = amplitude * std::exp(-(x * x + y * y) * inv);
        }
    return f;
}

Field2D make_gaussian_strip(const GridSpec& grid, double cx, double rms,
                            double amplitude) {
    Field2D f(grid);
    const double inv = 1.0 / (2.0 * rms * rms);
    for (int i = 0; i < grid.nx; ++i) {
        const double x = i * grid.dx - cx;
        const double v = amplitude * std::exp(-x * x * inv);
        for (int j = 0; j < grid.ny; ++j) f.at(i, j) = v;
    }
    return f;
}

Field2D make_disk(const GridSpec& grid, double cx, double cy, double radius,
                  double amplitude) {
    Field2D f(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = i * grid.dx - cx;
            const double y = j * grid.dx - cy;
            if (x * x + y * y <= radius * radius) f.at(i, j) = amplitude;
        }
    return f;
}

CapacityFrame make_desert_capacity(const GridSpec& grid, double fr, double x_low,
                                   double x_high) {
    if (!(fr > 0.0 && fr <= 1.0))
        throw std::invalid_argument("desert: fr must lie in (0,1]");
    CapacityFrame k{grid, 0.0, std::vector<double>(grid.cells(), 1.0)};
    const double cx = 0.5 * (grid.nx - 1) * grid.dx;
    for (int i = 0; i < grid.nx; ++i) {
        const double x = i * grid.dx - cx;
        if (x > x_low && x < x_high)
            for (int j = 0; j < grid.ny; ++j)
                k.values[std::size_t(j) * grid.nx + i] = fr;
    }
    return k;
}

Wave1DResult run_wave1d(const RunConfig& cfg) {
    const auto start = Clock::now();
    const int nx = cfg.nx > 0 ? cfg.nx : 601;
    const double dx = cfg.dx > 0 ? cfg.dx : 0.2;
    SolverParams params;
    params.h = cfg.h > 0 ? cfg.h : 0.2;
    params.dx = dx;
    params.beta = cfg.beta;
    params.regularize = cfg.regularize;
    params.validate();

    const double t_end = cfg.t_end > cfg.t_start ? cfg.t_end : 30.0;
    const std::string shape = cfg.init_shape.empty() ? "front" : cfg.init_shape;
    const double x0 = (cfg.init_shape.empty() && cfg.init_x == 0.0)
                          ? (nx - 1) * dx / 6.0
                          : cfg.init_x;

    std::vector<double> u(std::size_t(nx) + 2, 0.0);
    Wave1DResult res;
    res.x.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const double x = i * dx;
        res.x[i] = x;
        if (shape == "front") {
            // Developed-front seed: saturated behind x0, critical-rate
            // exponential tail ahead of it.
            u[i + 1] = 1.0 / (1.0 + std::exp(std::sqrt(2.0) * (x - x0)));
        } else if (shape == "gaussian") {
            const double w = cfg.init_width > 0 ? cfg.init_width : 3.0;
            u[i + 1] = cfg.init_amplitude * std::exp(-(x - x0) * (x - x0) / (2 * w * w));
        } else if (shape == "zero") {
            u[i + 1] = 0.0;
        } else {
            throw std::invalid_argument("wave1d: unknown init shape: " + shape);
        }
    }

    fs::create_directories(cfg.out_dir);
    const long steps = step_count(cfg.t_start, t_end, params.h);
    double next_snapshot = cfg.snapshot_every > 0 ? cfg.t_start + cfg.snapshot_every
                                                  : std::numeric_limits<double>::infinity();
    int snap_index = 0;
    auto emit_snapshot = [&](double t) {
        Snapshot snap{t, Field2D({nx, 1, dx})};
        std::copy(u.begin() + 1, u.end() - 1, snap.field.values.begin());
        const std::string path =
            (fs::path(cfg.out_dir) / snapshot_name("profile", snap_index++, "csv")).string();
        write_snapshot_csv(snap, path);
        res.summary.outputs.push_back(path);
    };

    for (long s = 0; s < steps; ++s) {
        auto next = step_1d(u, params);
        u.swap(next);
        const double t = cfg.t_start + (s + 1) * params.h;
        if (auto x_half = front_position({u.data() + 1, std::size_t(nx)}, 1.0, dx))
            res.trace.samples.push_back({t, *x_half});
        if (t >= next_snapshot - 1e-9) {
            emit_snapshot(t);
            next_snapshot += cfg.snapshot_every;
        }
        for (double v : u)
            if (!std::isfinite(v)) throw DivergedError(s);
    }
    emit_snapshot(cfg.t_start + steps * params.h);

    res.profile.assign(u.begin() + 1, u.end() - 1);
    const std::string trace_path = (fs::path(cfg.out_dir) / "front_trace.csv").string();
    write_front_trace(res.trace, trace_path);
    res.summary.outputs.push_back(trace_path);
    res.summary.t_final = cfg.t_start + steps * params.h;
    res.summary.steps = steps;
    res.summary.u_min = *std::min_element(res.profile.begin(), res.profile.end());
    res.summary.u_max = *std::max_element(res.profile.begin(), res.profile.end());
    res.summary.wall_seconds = seconds_since(start);
    return res;
}

Radial2DResult run_radial2d(const RunConfig& cfg) {
    const auto start = Clock::now();
    const int nx = cfg.nx > 0 ? cfg.nx : 201;
    const int ny = cfg.ny > 0 ? cfg.ny : nx;
    if (nx != ny) throw std::invalid_argument("radial2d: grid must be square");
    const GridSpec grid{nx, ny, cfg.dx > 0 ? cfg.dx : 0.4};
    SolverParams params;
    params.h = cfg.h > 0 ? cfg.h : 0.1;
    params.dx = grid.dx;
    params.beta = cfg.beta;
    params.alternate_directions = cfg.alternate_directions;
    params.regularize = cfg.regularize;
    const double t_end = cfg.t_end > cfg.t_start ? cfg.t_end : 20.0;
    const double rms = cfg.init_width > 0 ? cfg.init_width : 2.0;
    const double amplitude = cfg.init_amplitude > 0 ? cfg.init_amplitude : 1.0;

    const double cx = 0.5 * (nx - 1) * grid.dx;
    Radial2DResult res;
    Field2D u = make_gaussian_bump(grid, cx, cx, rms, amplitude);
    const MapMask mask = all_land_mask(grid);
    const Segmentation seg = segment_mask(mask);
    Stepper2D stepper(seg, grid, params, cfg.threads);

    fs::create_directories(cfg.out_dir);
    const long steps = step_count(cfg.t_start, t_end, params.h);
    double next_snapshot = cfg.snapshot_every > 0 ? cfg.t_start + cfg.snapshot_every
                                                  : std::numeric_limits<double>::infinity();
    int snap_index = 0;
    for (long s = 0; s < steps; ++s) {
        stepper.advance(u, nullptr, nullptr, s);
        const double t = cfg.t_start + (s + 1) * params.h;
        if (t >= next_snapshot - 1e-9) {
            const std::string path =
                (fs::path(cfg.out_dir) / snapshot_name("u", snap_index++, "csv")).string();
            write_snapshot_csv({t, u}, path);
            res.summary.outputs.push_back(path);
            next_snapshot += cfg.snapshot_every;
        }
    }
    const double t_final = cfg.t_start + steps * params.h;
    const std::string final_path = (fs::path(cfg.out_dir) / "final.csv").string();
    write_snapshot_csv({t_final, u}, final_path);
    res.summary.outputs.push_back(final_path);

    // Radial control covering out to the grid corners.
    const double r_max = std::sqrt(2.0) * cx + 1.0;
    RadialField r0;
    r0.dr = 0.1;
    r0.nr = int(std::ceil(r_max / r0.dr)) + 1;
    r0.values.resize(std::size_t(r0.nr));
    for (int i = 0; i < r0.nr; ++i) {
        const double r = i * r0.dr;
        r0.values[i] = amplitude * std::exp(-r * r / (2.0 * rms * rms));
    }
    res.reference = reference_radial(r0, t_final, 4);
    res.metrics = error_metrics(u, res.reference, cx, cx);

    const std::string metrics_path = (fs::path(cfg.out_dir) / "metrics.txt").string();
    std::ofstream mf(metrics_path);
    mf << "eps_rms " << format_double(res.metrics.rms) << "\n"
       << "eps_max " << format_double(res.metrics.max) << "\n";
    res.summary.outputs.push_back(metrics_path);

    res.field = std::move(u);
    res.summary.t_final = t_final;
    res.summary.steps = steps;
    res.summary.u_min = *std::min_element(res.field.values.begin(), res.field.values.end());
    res.summary.u_max = *std::max_element(res.field.values.begin(), res.field.values.end());
    res.summary.wall_seconds = seconds_since(start);
    return res;
}

DesertResult run_desert(const RunConfig& cfg) {
    const auto start = Clock::now();
    const int nx = cfg.nx > 0 ? cfg.nx : 201;
    const int ny = cfg.ny > 0 ? cfg.ny : 101;
    const GridSpec grid{nx, ny, cfg.dx > 0 ? cfg.dx : 0.4};
    SolverParams params;
    params.h = cfg.h > 0 ? cfg.h : 0.125;
    params.dx = grid.dx;
    params.beta = cfg.beta;
    params.alternate_directions = cfg.alternate_directions;
    params.regularize = cfg.regularize;
    const double t_end = cfg.t_end > cfg.t_start ? cfg.t_end : 50.0;

    const double cx = 0.5 * (nx - 1) * grid.dx;
    const CapacityFrame capacity = make_desert_capacity(grid, cfg.fr, -16.0, 16.0);
    const double strip_center = cx + (cfg.init_x != 0.0 ? cfg.init_x : -30.0);
    Field2D u = make_gaussian_strip(grid, strip_center,
                                    cfg.init_width > 0 ? cfg.init_width : 3.0,
                                    cfg.init_amplitude > 0 ? cfg.init_amplitude : 1.0);
    const MapMask mask = all_land_mask(grid);
    const Segmentation seg = segment_mask(mask);
    Stepper2D stepper(seg, grid, params, cfg.threads);

    DesertResult res;
    res.min_u = 0.0;
    const int mid_row = ny / 2;
    std::vector<double> row(nx), krow(nx);
    for (int i = 0; i < nx; ++i) krow[i] = capacity.at(i, mid_row);

    fs::create_directories(cfg.out_dir);
    const long steps = step_count(cfg.t_start, t_end, params.h);
    long done = 0;
    try {
        for (long s = 0; s < steps; ++s) {
            stepper.advance(u, &capacity, &capacity, s);
            done = s + 1;
            const double t = cfg.t_start + done * params.h;
            for (int i = 0; i < nx; ++i) row[i] = u.at(i, mid_row);
            if (auto x_half = front_position_leveled(row, krow, grid.dx))
                res.trace.samples.push_back({t, *x_half - cx});
            const double lo = *std::min_element(u.values.begin(), u.values.end());
            res.min_u = std::min(res.min_u, lo);
            if (lo < -1e-9) res.sign_change = true;
        }
    } catch (const DivergedError&) {
        // The unregularized deep-desert run is expected to blow up; what we
        // report is that the sign flip happened before it did.
        res.sign_change = true;
    }

    const std::string trace_path = (fs::path(cfg.out_dir) / "front_trace.csv").string();
    write_front_trace(res.trace, trace_path);
    res.summary.outputs.push_back(trace_path);
    const double t_final = cfg.t_start + done * params.h;
    const std::string final_path = (fs::path(cfg.out_dir) / "final.csv").string();
    write_snapshot_csv({t_final, u}, final_path);
    res.summary.outputs.push_back(final_path);

    res.summary.t_final = t_final;
    res.summary.steps = done;
    res.summary.u_min = *std::min_element(u.values.begin(), u.values.end());
    res.summary.u_max = *std::max_element(u.values.begin(), u.values.end());
    res.summary.wall_seconds = seconds_since(start);
    return res;
}

RunSummary run_map(const RunConfig& cfg) {
    const auto start = Clock::now();
    if (cfg.mask_path.empty()) throw std::invalid_argument("map-run: mask is required");
    const MapMask mask = load_mask_file(cfg.mask_path);
    const GridSpec grid = mask.grid;

    SigmoidSchedule schedule;
    schedule.nu = cfg.nu;
    if (!cfg.frames_path.empty()) {
        for (const auto& [t, path] : load_frame_manifest(cfg.frames_path))
            schedule.frames.push_back(load_capacity_file(path, t));
    } else if (!cfg.capacity_path.empty()) {
        schedule.frames.push_back(load_capacity_file(cfg.capacity_path, cfg.t_start));
    } else {
        throw std::invalid_argument("map-run: frames or capacity file is required");
    }
    for (auto& frame : schedule.frames) {
        check_capacity_consistent(mask, frame);
        if (cfg.smooth) {
            const int L = cfg.smooth_half_width > 0 ? cfg.smooth_half_width : 5;
            frame = smooth_frame(frame, mask, {L});
        }
    }
    schedule.validate();

    SolverParams params;
    params.h = cfg.h > 0 ? cfg.h : 0.125;
    params.dx = grid.dx;
    params.beta = cfg.beta;
    params.alternate_directions = cfg.alternate_directions;
    params.regularize = cfg.regularize;

    const double t_start = cfg.t_start;
    const double t_end = cfg.t_end > cfg.t_start
                             ? cfg.t_end
                             : std::max(schedule.t_last(), t_start + params.h);

    Field2D u;
    if (!cfg.init_path.empty()) {
        u = load_field_file(cfg.init_path);
        if (u.grid != grid)
            throw std::invalid_argument("map-run: initial condition grid mismatch");
    } else if (cfg.init_shape == "gaussian") {
        u = make_gaussian_bump(grid, cfg.init_x * grid.dx, cfg.init_y * grid.dx,
                               cfg.init_width * grid.dx, cfg.init_amplitude);
    } else {
        // Point seed at a pixel.
        u = Field2D(grid);
        const int ix = int(std::lround(cfg.init_x));
        const int iy = int(std::lround(cfg.init_y));
        if (ix < 0 || ix >= grid.nx || iy < 0 || iy >= grid.ny)
            throw std::invalid_argument("map-run: seed pixel out of range");
        u.at(ix, iy) = cfg.init_amplitude;
    }
    if (std::size_t zeroed = enforce_water_zero(u, mask))
        std::cerr << "warning: zeroed " << zeroed << " nonzero water cells in the"
                  << " initial condition\n";

    const Segmentation seg = segment_mask(mask);
    Stepper2D stepper(seg, grid, params, cfg.threads);

    auto capacity_clamped = [&](double t) {
        return capacity_at(schedule,
                           std::clamp(t, schedule.t_first(), schedule.t_last()));
    };

    RunSummary summary;
    fs::create_directories(cfg.out_dir);
    const long steps = step_count(t_start, t_end, params.h);
    double next_snapshot = cfg.snapshot_every > 0 ? t_start + cfg.snapshot_every
                                                  : std::numeric_limits<double>::infinity();
    int snap_index = 0;
    for (long s = 0; s < steps; ++s) {
        const double t = t_start + s * params.h;
        const CapacityFrame k_now = capacity_clamped(t);
        const CapacityFrame k_next = capacity_clamped(t + params.h);
        stepper.advance(u, &k_now, &k_next, s);
        if (t + params.h >= next_snapshot - 1e-9) {
            const std::string base =
                (fs::path(cfg.out_dir) / snapshot_name("u", snap_index++, "csv")).string();
            write_snapshot_csv({t + params.h, u}, base);
            summary.outputs.push_back(base);
            const std::string pgm = base.substr(0, base.size() - 3) + "pgm";
            write_snapshot_pgm({t + params.h, u}, pgm);
            summary.outputs.push_back(pgm);
            next_snapshot += cfg.snapshot_every;
        }
    }
    const double t_final = t_start + steps * params.h;
    const std::string final_csv = (fs::path(cfg.out_dir) / "final.csv").string();
    const std::string final_pgm = (fs::path(cfg.out_dir) / "final.pgm").string();
    write_snapshot_csv({t_final, u}, final_csv);
    write_snapshot_pgm({t_final, u}, final_pgm);
    summary.outputs.push_back(final_csv);
    summary.outputs.push_back(final_pgm);

    summary.t_final = t_final;
    summary.steps = steps;
    summary.u_min = *std::min_element(u.values.begin(), u.values.end());
    summary.u_max = *std::max_element(u.values.begin(), u.values.end());
    summary.wall_seconds = seconds_since(start);
    return summary;
}

RunSummary run_segment_debug(const RunConfig& cfg) {
    const auto start = Clock::now();
    if (cfg.mask_path.empty())
        throw std::invalid_argument("segment-debug: mask is required");
    const MapMask mask = load_mask_file(cfg.mask_path);
    const Segmentation seg = segment_mask(mask);

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "segments.csv").string();
    std::ofstream out(path);
    out << "axis,line,start,end\n";  // 1-based, matching the file format docs
    for (int j = 0; j < mask.grid.ny; ++j)
        for (const Segment& s : seg.rows[j])
            out << "x," << j + 1 << ',' << s.start + 1 << ',' << s.end + 1 << '\n';
    for (int i = 0; i < mask.grid.nx; ++i)
        for (const Segment& s : seg.cols[i])
            out << "y," << i + 1 << ',' << s.start + 1 << ',' << s.end + 1 << '\n';

    RunSummary summary;
    summary.outputs.push_back(path);
    summary.steps = long(seg.habitable_cells());
    summary.wall_seconds = seconds_since(start);
    return summary;
}

RunSummary run_smooth_map(const RunConfig& cfg) {
    const auto start = Clock::now();
    if (cfg.capacity_path.empty())
        throw std::invalid_argument("smooth-map: capacity file is required");
    CapacityFrame frame = load_capacity_file(cfg.capacity_path);
    MapMask mask;
    if (!cfg.mask_path.empty()) {
        mask = load_mask_file(cfg.mask_path);
        check_capacity_consistent(mask, frame);
    } else {
        mask.grid = frame.grid;
        mask.habitable.reserve(frame.values.size());
        for (double v : frame.values) mask.habitable.push_back(v > 0.0 ? 1 : 0);
    }
    const int L = cfg.smooth_half_width > 0 ? cfg.smooth_half_width : 5;
    const CapacityFrame smoothed = smooth_frame(frame, mask, {L});

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "smoothed.txt").string();
    write_grid_file(path, smoothed.grid, smoothed.values);
    RunSummary summary;
    summary.outputs.push_back(path);
    summary.wall_seconds = seconds_since(start);
    return summary;
}

RunSummary run_interp_preview(const RunConfig& cfg) {
    const auto start = Clock::now();
    if (cfg.frames_path.empty())
        throw std::invalid_argument("interp-preview: frame manifest is required");
    SigmoidSchedule schedule;
    schedule.nu = cfg.nu;
    for (const auto& [t, path] : load_frame_manifest(cfg.frames_path))
        schedule.frames.push_back(load_capacity_file(path, t));
    schedule.validate();

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "interp_preview.csv").string();
    std::ofstream out(path);
    out << "t,bracket_weight,k_mean\n";
    const int samples = 101;
    const double t0 = schedule.t_first(), t1 = schedule.t_last();
    for (int i = 0; i < samples; ++i) {
        const double t = (schedule.frames.size() == 1)
                             ? t0
                             : t0 + (t1 - t0) * double(i) / (samples - 1);
        const CapacityFrame k = capacity_at(schedule, t);
        double mean = 0.0;
        for (double v : k.values) mean += v;
        mean /= double(k.values.size());
        double weight = 0.0;
        if (schedule.frames.size() > 1) {
            std::size_t hi = 1;
            while (schedule.frames[hi].time < t) ++hi;
            weight = sigmoid_weight(t, schedule.frames[hi - 1].time,
                                    schedule.frames[hi].time, schedule.nu);
        }
        out << format_double(t) << ',' << format_double(weight) << ','
            << format_double(mean) << '\n';
    }
    RunSummary summary;
    summary.outputs.push_back(path);
    summary.wall_seconds = seconds_since(start);
    return summary;
}

RunSummary run_scenario(const RunConfig& cfg) {
    if (cfg.scenario == "wave1d") return run_wave1d(cfg).summary;
    if (cfg.scenario == "radial2d") return run_radial2d(cfg).summary;
    if (cfg.scenario == "desert") return run_desert(cfg).summary;
    if (cfg.scenario == "map-run") return run_map(cfg);
    if (cfg.scenario == "segment-debug") return run_segment_debug(cfg);
    if (cfg.scenario == "smooth-map") return run_smooth_map(cfg);
    if (cfg.scenario == "interp-preview") return run_interp_preview(cfg);
    throw std::invalid_argument("unknown scenario: " + cfg.scenario);
}

}  // namespace kpp
