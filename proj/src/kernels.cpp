#include "kpp/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <thread>

#include "kpp/linalg.hpp"

namespace kpp {

void SolverParams::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("SolverParams: h must be > 0");
    if (!(dx > 0.0)) throw std::invalid_argument("SolverParams: dx must be > 0");
    if (!(beta >= 1.0)) throw std::invalid_argument("SolverParams: beta must be >= 1");
}

double regularized_ratio(double u, double capacity, double h, double beta) {
    if (!(capacity > 0.0))
        throw std::domain_error("regularized_ratio: capacity must be > 0");
    const double x = h * u / capacity;
    // Odd extension keeps the map linear through 0 for the tiny negative
    // values that roundoff can produce mid-step.
    const double ax = std::abs(x);
    const double g = std::pow(std::tanh(std::pow(ax, beta)), 1.0 / beta);
    return std::copysign(g, x) / h;
}

namespace {

// u/K coefficient as it appears in the logistic terms, optionally regularized.
inline double logistic_ratio(double u, double capacity, const SolverParams& p) {
    if (p.regularize) return regularized_ratio(u, capacity, p.h, p.beta);
    return u / capacity;
}

// Full semi-implicit line step on a padded line (interior cells 1..n):
//   u_E  = u + k A u + h (1 - u/K_now) u
//   (1 - (k/2) A - (h/2)(1 - u_E/K_next)) u+ = u + (k/2) A u + (h/2)(1 - u/K_now) u
// cap spans may be empty (constant K = 1). Result written into the interior
// of u_padded; ghosts stay put.
void logistic_line_step(std::span<double> u_padded, std::span<const double> cap_now,
                        std::span<const double> cap_next, const SolverParams& p,
                        std::span<double> euler, std::span<double> diag,
                        std::span<double> rhs) {
    const std::size_t n = u_padded.size() - 2;
    const double k = p.cfl();
    const double h = p.h;
    for (std::size_t i = 1; i <= n; ++i) {
        const double a_u = u_padded[i - 1] - 2.0 * u_padded[i] + u_padded[i + 1];
        // Constant K = 1 recovers the unregularized scheme exactly; the
        // regularizer exists for deep holes in capacity maps only.
        const double ratio_now =
            cap_now.empty() ? u_padded[i] : logistic_ratio(u_padded[i], cap_now[i], p);
        const double growth = (1.0 - ratio_now) * u_padded[i];
        euler[i] = u_padded[i] + k * a_u + h * growth;
        rhs[i - 1] = u_padded[i] + 0.5 * k * a_u + 0.5 * h * growth;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const double ratio_next =
            cap_next.empty() ? euler[i] : logistic_ratio(euler[i], cap_next[i], p);
        diag[i - 1] = 1.0 + k - 0.5 * h * (1.0 - ratio_next);
    }
    assert(TridiagSystem(n, -0.5 * k, -0.5 * k,
                         {diag.begin(), diag.begin() + n},
                         {rhs.begin(), rhs.begin() + n})
               .strictly_dominant());
    solve_tridiagonal_inplace(n, -0.5 * k, -0.5 * k, diag.subspan(0, n), rhs.subspan(0, n));
    for (std::size_t i = 1; i <= n; ++i) u_padded[i] = rhs[i - 1];
}

// Half diffusion step: (1 - (k/4) A) u+ = (1 + (k/4) A) u on a padded line.
void half_diffusion_line_step(std::span<double> u_padded, const SolverParams& p,
                              std::span<double> diag, std::span<double> rhs) {
    const std::size_t n = u_padded.size() - 2;
    const double q = 0.25 * p.cfl();
    for (std::size_t i = 1; i <= n; ++i) {
        rhs[i - 1] = u_padded[i] +
                     q * (u_padded[i - 1] - 2.0 * u_padded[i] + u_padded[i + 1]);
        diag[i - 1] = 1.0 + 2.0 * q;
    }
    solve_tridiagonal_inplace(n, -q, -q, diag.subspan(0, n), rhs.subspan(0, n));
    for (std::size_t i = 1; i <= n; ++i) u_padded[i] = rhs[i - 1];
}

}  // namespace

std::vector<double> euler_estimate_1d(std::span<const double> u_padded,
                                      const SolverParams& params,
                                      std::span<const double> capacity_padded) {
    params.validate();
    const std::size_t n = u_padded.size() - 2;
    const double k = params.cfl();
    std::vector<double> out(u_padded.begin(), u_padded.end());
    for (std::size_t i = 1; i <= n; ++i) {
        const double a_u = u_padded[i - 1] - 2.0 * u_padded[i] + u_padded[i + 1];
        const double ratio =
            capacity_padded.empty()
                ? u_padded[i]
                : logistic_ratio(u_padded[i], capacity_padded[i], params);
        out[i] = u_padded[i] + k * a_u + params.h * (1.0 - ratio) * u_padded[i];
    }
    return out;
}

std::vector<double> step_1d(std::span<const double> u_padded, const SolverParams& params) {
    params.validate();
    std::vector<double> u(u_padded.begin(), u_padded.end());
    const std::size_t n = u.size() - 2;
    std::vector<double> euler(n + 2), diag(n + 2), rhs(n + 2);
    logistic_line_step(u, {}, {}, params, euler, diag, rhs);
    return u;
}

StepWorkspace::StepWorkspace(std::size_t line_capacity)
    : capacity_(line_capacity),
      u_(line_capacity),
      cap_now_(line_capacity),
      cap_next_(line_capacity),
      euler_(line_capacity),
      diag_(line_capacity),
      rhs_(line_capacity) {}

std::size_t StepWorkspace::max_buffer_cells() const {
    return std::max({u_.size(), cap_now_.size(), cap_next_.size(), euler_.size(),
                     diag_.size(), rhs_.size()});
}

Stepper2D::Stepper2D(const Segmentation& seg, GridSpec grid, SolverParams params,
                     int threads)
    : seg_(seg), grid_(grid), params_(params), threads_(std::max(1, threads)) {
    grid_.validate();
    params_.validate();
    if (int(seg.rows.size()) != grid.ny || int(seg.cols.size()) != grid.nx)
        throw std::invalid_argument("segmentation does not match grid");
    line_capacity_ = std::size_t(std::max(grid.nx, grid.ny)) + 2;
    workspaces_.reserve(threads_);
    for (int t = 0; t < threads_; ++t) workspaces_.emplace_back(line_capacity_);
}

std::size_t Stepper2D::workspace_max_buffer_cells() const {
    std::size_t m = 0;
    for (const auto& ws : workspaces_) m = std::max(m, ws.max_buffer_cells());
    return m;
}

void Stepper2D::sweep_half_diffusion(Field2D& u, Axis axis, StepWorkspace& ws,
                                     int line) const {
    for (const Segment& seg : seg_.line(axis, line)) {
        const std::size_t len = std::size_t(seg.length()) + 2;
        auto u_line = ws.u().subspan(0, len);
        extract_segment(u, axis, line, seg, u_line);
        half_diffusion_line_step(u_line, params_, ws.diag(), ws.rhs());
        writeback_segment(u, axis, line, seg, u_line);
    }
}

void Stepper2D::sweep_full_logistic(Field2D& u, Axis axis, const CapacityFrame* cap_now,
                                    const CapacityFrame* cap_next, StepWorkspace& ws,
                                    int line) const {
    for (const Segment& seg : seg_.line(axis, line)) {
        const std::size_t len = std::size_t(seg.length()) + 2;
        auto u_line = ws.u().subspan(0, len);
        extract_segment(u, axis, line, seg, u_line);
        std::span<const double> know, knext;
        if (cap_now) {
            extract_capacity_segment(*cap_now, axis, line, seg, ws.cap_now());
            know = ws.cap_now().subspan(0, len);
        }
        if (cap_next) {
            extract_capacity_segment(*cap_next, axis, line, seg, ws.cap_next());
            knext = ws.cap_next().subspan(0, len);
        }
        logistic_line_step(u_line, know, knext, params_, ws.euler(), ws.diag(), ws.rhs());
        writeback_segment(u, axis, line, seg, u_line);
    }
}

void Stepper2D::run_lines(int line_count,
                          const std::function<void(int, StepWorkspace&)>& body) {
    const int workers = std::min(threads_, line_count);
    if (workers <= 1) {
        for (int line = 0; line < line_count; ++line) body(line, workspaces_[0]);
        return;
    }
    // Lines within one sweep touch disjoint cells, so a static partition is
    // both safe and deterministic.
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int line = w; line < line_count; line += workers)
                body(line, workspaces_[w]);
        });
    }
    for (auto& t : pool) t.join();
}

void Stepper2D::advance(Field2D& u, const CapacityFrame* capacity_now,
                        const CapacityFrame* capacity_next, long step_index) {
    if (u.grid != grid_) throw std::invalid_argument("field grid does not match stepper");
    if ((capacity_now == nullptr) != (capacity_next == nullptr))
        throw std::invalid_argument("pass both capacity frames or neither");
    if (capacity_now && (capacity_now->grid != grid_ || capacity_next->grid != grid_))
        throw std::invalid_argument("capacity frame grid does not match stepper");

    const bool swap = params_.alternate_directions && (step_index % 2 != 0);
    const Axis half_axis = swap ? Axis::Y : Axis::X;
    const Axis full_axis = swap ? Axis::X : Axis::Y;
    const int half_lines = (half_axis == Axis::X) ? grid_.ny : grid_.nx;
    const int full_lines = (full_axis == Axis::X) ? grid_.ny : grid_.nx;

    run_lines(half_lines, [&](int line, StepWorkspace& ws) {
        sweep_half_diffusion(u, half_axis, ws, line);
    });
    run_lines(full_lines, [&](int line, StepWorkspace& ws) {
        sweep_full_logistic(u, full_axis, capacity_now, capacity_next, ws, line);
    });
    run_lines(half_lines, [&](int line, StepWorkspace& ws) {
        sweep_half_diffusion(u, half_axis, ws, line);
    });

    for (double v : u.values)
        if (!std::isfinite(v)) throw DivergedError(step_index);
}

Field2D godunov_step_2d(const Field2D& u, const Segmentation& seg,
                        const CapacityFrame& capacity_now,
                        const CapacityFrame& capacity_next,
                        const SolverParams& params, long step_index) {
    Field2D out = u;
    Stepper2D stepper(seg, u.grid, params);
    stepper.advance(out, &capacity_now, &capacity_next, step_index);
    return out;
}

}  // namespace kpp
