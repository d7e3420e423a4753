#pragma once

#include <vector>

#include "kpp/domain.hpp"

namespace kpp {

/// Physical model inputs: growth rate (1/time), diffusion coefficient
/// (area/time), and the physical side length of one grid cell.
struct PhysicalParams {
    double lambda = 0.0;
    double c = 0.0;
    double pixel_size = 0.0;
};

struct ScaledQuantities {
    double dx = 0.0;      // scaled grid spacing
    double h = 0.0;       // scaled time step
    double extent = 0.0;  // scaled length of the supplied physical extent
};

/// Nondimensionalization: x_scaled = sqrt(lambda/(2c)) x, t_scaled = lambda t.
ScaledQuantities scale_to_dimensionless(const PhysicalParams& p, double physical_dt,
                                        double physical_extent);

/// Low-pass map filter: half-width L cells, window |ix| < L, |jy| < L,
/// separable weights (1 - (ix/L)^2)(1 - (jy/L)^2).
struct SmoothingFilter {
    int half_width = 1;
};

/// Weight-normalized window average over accepted neighbors. Water pixels
/// and out-of-range rows are skipped, columns wrap in longitude. Water
/// output stays exactly 0.
CapacityFrame smooth_frame(const CapacityFrame& frame, const MapMask& mask,
                           const SmoothingFilter& filter);

/// Sigmoid S(z(t)) with z = (2 dT (t-tL) - dT^2) / ((t-tL)(dT-(t-tL)))^nu.
/// Exactly 0 at tL and 1 at tH (the limits are analytic, every derivative
/// vanishes there). Throws std::out_of_range outside [tL, tH].
double sigmoid_weight(double t, double t_low, double t_high, double nu);

/// Time-ordered capacity frames plus the interpolation exponent.
struct SigmoidSchedule {
    std::vector<CapacityFrame> frames;
    double nu = 1.0;

    void validate() const;
    double t_first() const { return frames.front().time; }
    double t_last() const { return frames.back().time; }
};

/// Pixelwise homotopy K(t) = K_L (1 - S) + K_H S between the bracketing
/// frames; returns the stored frame bit-exactly at frame timestamps.
CapacityFrame capacity_at(const SigmoidSchedule& schedule, double t);

}  // namespace kpp
