#include "kpp/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace kpp {

ScaledQuantities scale_to_dimensionless(const PhysicalParams& p, double physical_dt,
                                        double physical_extent) {
    if (!(p.lambda > 0.0 && p.c > 0.0 && p.pixel_size > 0.0))
        throw std::invalid_argument("PhysicalParams must be strictly positive");
    if (!(physical_dt > 0.0))
        throw std::invalid_argument("physical_dt must be > 0");
    const double length_scale = std::sqrt(p.lambda / (2.0 * p.c));
    return {length_scale * p.pixel_size, p.lambda * physical_dt,
            length_scale * physical_extent};
}

CapacityFrame smooth_frame(const CapacityFrame& frame, const MapMask& mask,
                           const SmoothingFilter& filter) {
    if (frame.grid != mask.grid)
        throw std::invalid_argument("smooth_frame: frame and mask grids differ");
    const int L = filter.half_width;
    if (L < 1) throw std::invalid_argument("smooth_frame: half-width must be >= 1");
    const int nx = frame.grid.nx, ny = frame.grid.ny;
    CapacityFrame out;
    out.grid = frame.grid;
    out.time = frame.time;
    out.values.assign(frame.values.size(), 0.0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!mask.at(i, j)) continue;  // water stays 0
            double weight_sum = 0.0, value_sum = 0.0;
            for (int jy = -(L - 1); jy <= L - 1; ++jy) {
                const int row = j + jy;
                if (row < 0 || row >= ny) continue;
                const double wy = 1.0 - double(jy) * jy / (double(L) * L);
                for (int ix = -(L - 1); ix <= L - 1; ++ix) {
                    int col = (i + ix) % nx;  // longitude wraps
                    if (col < 0) col += nx;
                    if (!mask.at(col, row)) continue;
                    const double w = wy * (1.0 - double(ix) * ix / (double(L) * L));
                    weight_sum += w;
                    value_sum += w * frame.at(col, row);
                }
            }
            // The center pixel is habitable, so weight_sum >= 1.
            out.values[std::size_t(j) * nx + i] = value_sum / weight_sum;
        }
    }
    return out;
}

double sigmoid_weight(double t, double t_low, double t_high, double nu) {
    if (!(t_low < t_high))
        throw std::invalid_argument("sigmoid_weight: need t_low < t_high");
    if (!(nu > 0.0)) throw std::invalid_argument("sigmoid_weight: nu must be > 0");
    if (t < t_low || t > t_high)
        throw std::out_of_range("sigmoid_weight: t outside [t_low, t_high]");
    if (t == t_low) return 0.0;
    if (t == t_high) return 1.0;
    const double dt = t_high - t_low;
    const double s = t - t_low;
    const double z = (2.0 * dt * s - dt * dt) / std::pow(s * (dt - s), nu);
    return 1.0 / (1.0 + std::exp(-z));
}

void SigmoidSchedule::validate() const {
    if (frames.empty()) throw std::invalid_argument("schedule needs at least one frame");
    if (!(nu > 0.0)) throw std::invalid_argument("schedule: nu must be > 0");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!std::isfinite(frames[i].time))
            throw std::invalid_argument("schedule: non-finite frame time");
        if (frames[i].grid != frames[0].grid)
            throw std::invalid_argument("schedule: frames must share one grid");
        if (i > 0 && !(frames[i - 1].time < frames[i].time))
            throw std::invalid_argument("schedule: frame times must strictly increase");
    }
}

CapacityFrame capacity_at(const SigmoidSchedule& schedule, double t) {
    schedule.validate();
    const auto& frames = schedule.frames;
    if (frames.size() == 1) return frames.front();
    if (t < schedule.t_first() || t > schedule.t_last())
        throw std::out_of_range("capacity_at: t outside schedule range");
    for (const auto& f : frames)
        if (t == f.time) return f;
    std::size_t hi = 1;
    while (frames[hi].time < t) ++hi;
    const CapacityFrame& lo_frame = frames[hi - 1];
    const CapacityFrame& hi_frame = frames[hi];
    const double s = sigmoid_weight(t, lo_frame.time, hi_frame.time, schedule.nu);
    CapacityFrame out;
    out.grid = lo_frame.grid;
    out.time = t;
    out.values.resize(lo_frame.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = lo_frame.values[i] * (1.0 - s) + hi_frame.values[i] * s;
    return out;
}

}  // namespace kpp
