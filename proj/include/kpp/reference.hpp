#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kpp/domain.hpp"

namespace kpp {

/// Radially symmetric profile, r_i = i * dr.
struct RadialField {
    int nr = 0;
    double dr = 0.0;
    std::vector<double> values;
};

struct FrontSample {
    double t = 0.0;
    double x_half = 0.0;
};

/// Half-height front positions over time, with the capacity level the
/// half-height refers to.
struct FrontTrace {
    std::vector<FrontSample> samples;
    double k_local = 1.0;
};

struct ErrorMetrics {
    double rms = 0.0;
    double max = 0.0;
};

/// Term toggles for the reference integrators (used by the closed-form
/// reduction checks).
struct ReferenceTerms {
    bool growth = true;
    bool diffusion = true;
};

/// Fine-grid forward-Euler method-of-lines control solution for
/// u_t = (1-u)u + (1/2) u_xx with Dirichlet zero ends. The grid is refined
/// `refine`-fold in space; the internal time step is chosen to keep the
/// explicit CFL parameter at 0.2 (< 1/4). The result is restricted back to
/// the input grid by sampling.
std::vector<double> reference_1d(std::span<const double> u0, double dx, double t_end,
                                 int refine, ReferenceTerms terms = {});

/// Radially symmetric control solution; the r = 0 cell uses the symmetry
/// form of the cylindrical Laplacian (2 d^2/dr^2 at the origin).
RadialField reference_radial(const RadialField& u0, double t_end, int refine,
                             ReferenceTerms terms = {});

/// Position of the first crossing of K_level/2 scanned from the leading
/// (largest-x) side, linearly interpolated; nullopt when u never reaches
/// the level.
std::optional<double> front_position(std::span<const double> u, double k_level,
                                     double dx);

struct VelocitySample {
    double t = 0.0;
    double v = 0.0;
};

/// Centered finite differences of x_half over t, restricted to [t0, t1].
std::vector<VelocitySample> front_velocity(const FrontTrace& trace, double t0, double t1);

/// Least-squares slope of x_half(t) over [t0, t1].
double front_velocity_fit(const FrontTrace& trace, double t0, double t1);

/// Compares every 2-D cell against the radial profile at its distance from
/// (center_x, center_y), cells within 2 of the square boundary and cells
/// beyond the radial domain excluded; cells where both values are below
/// 1e-12 are skipped. Coordinates are in grid units (cell i sits at i*dx).
ErrorMetrics error_metrics(const Field2D& u, const RadialField& radial,
                           double center_x, double center_y);

/// Signed error field u - radial reference (0 where excluded); used for the
/// symmetry diagnostics.
Field2D radial_error_field(const Field2D& u, const RadialField& radial,
                           double center_x, double center_y);

}  // namespace kpp
