#include "kpp/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace kpp {

namespace {

constexpr double kTargetCfl = 0.2;  // explicit bound is 1/4

// Linear interpolation of a coarse profile onto a refine-times finer grid.
std::vector<double> refine_profile(std::span<const double> u0, int refine) {
    const std::size_t n = u0.size();
    std::vector<double> fine((n - 1) * std::size_t(refine) + 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (int r = 0; r < refine; ++r) {
            const double a = double(r) / refine;
            fine[i * refine + r] = (1.0 - a) * u0[i] + a * u0[i + 1];
        }
    fine.back() = u0.back();
    return fine;
}

struct TimeGrid {
    long steps;
    double h;
};

TimeGrid stable_time_grid(double t_end, double dx_fine) {
    const double h_max = kTargetCfl * 2.0 * dx_fine * dx_fine;
    const long steps = std::max(1L, long(std::ceil(t_end / h_max)));
    const double h = t_end / double(steps);
    if (h / (2.0 * dx_fine * dx_fine) >= 0.25)
        throw std::invalid_argument("reference solver: explicit CFL bound violated");
    return {steps, h};
}

}  // namespace

std::vector<double> reference_1d(std::span<const double> u0, double dx, double t_end,
                                 int refine, ReferenceTerms terms) {
    if (refine < 4) throw std::invalid_argument("reference_1d: refine must be >= 4");
    if (!(dx > 0.0)) throw std::invalid_argument("reference_1d: dx must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("reference_1d: t_end must be >= 0");
    std::vector<double> u = refine_profile(u0, refine);
    if (t_end == 0.0) {
        std::vector<double> out(u0.begin(), u0.end());
        return out;
    }
    const double dxf = dx / refine;
    const auto [steps, h] = stable_time_grid(t_end, dxf);
    const double k = terms.diffusion ? h / (2.0 * dxf * dxf) : 0.0;
    const double g = terms.growth ? h : 0.0;
    const std::size_t n = u.size();
    std::vector<double> next(n);
    for (long s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const double left = (i > 0) ? u[i - 1] : 0.0;
            const double right = (i + 1 < n) ? u[i + 1] : 0.0;
            next[i] = u[i] + k * (left - 2.0 * u[i] + right) + g * (1.0 - u[i]) * u[i];
        }
        u.swap(next);
    }
    std::vector<double> out(u0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i * refine];
    return out;
}

RadialField reference_radial(const RadialField& u0, double t_end, int refine,
                             ReferenceTerms terms) {
    if (u0.nr < 3 || int(u0.values.size()) != u0.nr)
        throw std::invalid_argument("reference_radial: malformed radial field");
    if (refine < 1) throw std::invalid_argument("reference_radial: refine must be >= 1");
    if (!(u0.dr > 0.0)) throw std::invalid_argument("reference_radial: dr must be > 0");
    std::vector<double> u = refine_profile(u0.values, refine);
    RadialField out{u0.nr, u0.dr, std::vector<double>(std::size_t(u0.nr))};
    if (t_end == 0.0) {
        out.values = u0.values;
        return out;
    }
    const double drf = u0.dr / refine;
    const auto [steps, h] = stable_time_grid(t_end, drf);
    const double diff = terms.diffusion ? 0.5 * h / (drf * drf) : 0.0;
    const double g = terms.growth ? h : 0.0;
    const std::size_t n = u.size();
    std::vector<double> next(n);
    for (long s = 0; s < steps; ++s) {
        // r = 0: Laplacian -> 2 u_rr with u_r(0) = 0, so 4 (u1 - u0) / dr^2.
        next[0] = u[0] + diff * 4.0 * (u[1] - u[0]) + g * (1.0 - u[0]) * u[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double right = (i + 1 < n) ? u[i + 1] : 0.0;
            const double u_rr = u[i - 1] - 2.0 * u[i] + right;
            const double u_r = 0.5 * (right - u[i - 1]);
            next[i] = u[i] + diff * (u_rr + u_r / double(i)) + g * (1.0 - u[i]) * u[i];
        }
        u.swap(next);
    }
    for (int i = 0; i < u0.nr; ++i) out.values[i] = u[std::size_t(i) * refine];
    return out;
}

std::optional<double> front_position(std::span<const double> u, double k_level,
                                     double dx) {
    const double level = 0.5 * k_level;
    const std::size_t n = u.size();
    if (n < 2) return std::nullopt;
    for (std::size_t i = n - 1; i-- > 0;) {
        if (u[i] >= level && u[i + 1] < level) {
            const double frac = (u[i] - level) / (u[i] - u[i + 1]);
            return (double(i) + frac) * dx;
        }
    }
    return std::nullopt;
}

std::vector<VelocitySample> front_velocity(const FrontTrace& trace, double t0, double t1) {
    std::vector<VelocitySample> out;
    const auto& s = trace.samples;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i].t < t0 || s[i].t > t1) continue;
        out.push_back({s[i].t, (s[i + 1].x_half - s[i - 1].x_half) /
                                   (s[i + 1].t - s[i - 1].t)});
    }
    return out;
}

double front_velocity_fit(const FrontTrace& trace, double t0, double t1) {
    double st = 0, sx = 0, stt = 0, stx = 0;
    std::size_t n = 0;
    for (const auto& s : trace.samples) {
        if (s.t < t0 || s.t > t1) continue;
        st += s.t;
        sx += s.x_half;
        stt += s.t * s.t;
        stx += s.t * s.x_half;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("front_velocity_fit: not enough samples");
    const double denom = double(n) * stt - st * st;
    return (double(n) * stx - st * sx) / denom;
}

namespace {

// Evaluates the error at each included cell; calls sink(ix, iy, diff).
template <typename Sink>
void for_each_radial_error(const Field2D& u, const RadialField& radial,
                           double center_x, double center_y, Sink&& sink) {
    const int nx = u.grid.nx, ny = u.grid.ny;
    const double dx = u.grid.dx;
    const double r_max = (radial.nr - 1) * radial.dr;
    for (int j = 2; j < ny - 2; ++j) {
        for (int i = 2; i < nx - 2; ++i) {
            const double x = i * dx - center_x;
            const double y = j * dx - center_y;
            const double r = std::hypot(x, y);
            if (r > r_max) continue;
            const double pos = r / radial.dr;
            const std::size_t lo = std::min(std::size_t(pos), std::size_t(radial.nr - 2));
            const double frac = pos - double(lo);
            const double ref =
                (1.0 - frac) * radial.values[lo] + frac * radial.values[lo + 1];
            sink(i, j, u.at(i, j) - ref, ref);
        }
    }
}

}  // namespace

ErrorMetrics error_metrics(const Field2D& u, const RadialField& radial,
                           double center_x, double center_y) {
    double sum_sq = 0.0, max_abs = 0.0;
    std::size_t count = 0;
    for_each_radial_error(u, radial, center_x, center_y,
                          [&](int i, int j, double diff, double ref) {
                              if (std::abs(u.at(i, j)) <= 1e-12 && std::abs(ref) <= 1e-12)
                                  return;
                              sum_sq += diff * diff;
                              max_abs = std::max(max_abs, std::abs(diff));
                              ++count;
                          });
    if (count == 0) return {0.0, 0.0};
    return {std::sqrt(sum_sq / double(count)), max_abs};
}

Field2D radial_error_field(const Field2D& u, const RadialField& radial,
                           double center_x, double center_y) {
    Field2D e(u.grid, 0.0);
    for_each_radial_error(u, radial, center_x, center_y,
                          [&](int i, int j, double diff, double) { e.at(i, j) = diff; });
    return e;
}

}  // namespace kpp
