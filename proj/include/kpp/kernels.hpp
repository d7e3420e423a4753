#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "kpp/domain.hpp"

namespace kpp {

struct DivergedError : std::runtime_error {
    long step_index;
    explicit DivergedError(long step)
        : std::runtime_error("simulation diverged (non-finite u) at step " +
                             std::to_string(step)),
          step_index(step) {}
};

/// Scheme parameters. The CFL parameter k = h / (2 dx^2) is always derived,
/// never stored, so it cannot drift out of sync with h and dx.
struct SolverParams {
    double h = 0.0;
    double dx = 0.0;
    double beta = 4.0;
    bool alternate_directions = true;
    bool regularize = true;

    double cfl() const { return h / (2.0 * dx * dx); }
    void validate() const;
};

/// (1/h) g(h u / K) with g(x) = (tanh(x^beta))^(1/beta): a monotone
/// saturation of the ratio u/K, linear for small arguments and bounded by
/// 1/h, so the logistic coefficient can never flip the sign of u(t+h).
double regularized_ratio(double u, double capacity, double h, double beta);

/// One explicit Euler estimate on a padded line (ghost zeros in u, ghost
/// ones in capacity): u_E = u + k A u + h (1 - u/K) u. Pass an empty
/// capacity span for the constant K = 1 scaling.
std::vector<double> euler_estimate_1d(std::span<const double> u_padded,
                                      const SolverParams& params,
                                      std::span<const double> capacity_padded = {});

/// One semi-implicit 1-D step with constant K = 1:
/// (1 - (k/2) A - (h/2)(1 - u_E)) u(t+h) = u + (k/2) A u + (h/2)(1 - u) u.
/// Input and output are padded with zero ghosts.
std::vector<double> step_1d(std::span<const double> u_padded, const SolverParams& params);

/// Per-line scratch buffers, each sized max(nx, ny) + 2; one set per worker
/// thread, reused across every segment of every sweep.
class StepWorkspace {
public:
    explicit StepWorkspace(std::size_t line_capacity);

    std::size_t line_capacity() const { return capacity_; }
    /// Largest single buffer, in cells (workspace accounting: must never
    /// exceed line_capacity()).
    std::size_t max_buffer_cells() const;

    std::span<double> u() { return {u_.data(), capacity_}; }
    std::span<double> cap_now() { return {cap_now_.data(), capacity_}; }
    std::span<double> cap_next() { return {cap_next_.data(), capacity_}; }
    std::span<double> euler() { return {euler_.data(), capacity_}; }
    std::span<double> diag() { return {diag_.data(), capacity_}; }
    std::span<double> rhs() { return {rhs_.data(), capacity_}; }

private:
    std::size_t capacity_;
    std::vector<double> u_, cap_now_, cap_next_, euler_, diag_, rhs_;
};

/// 2-D Godunov--Strang--Yoshida stepper over a segmented map. Each step is
/// three sweeps: half diffusion step along one axis, a full semi-implicit
/// step (diffusion + logistic) along the other, then the first half again.
/// With alternate_directions set, the axis roles swap on odd step indices.
class Stepper2D {
public:
    Stepper2D(const Segmentation& seg, GridSpec grid, SolverParams params, int threads = 1);

    /// Advances u in place from t to t+h. capacity_now / capacity_next are
    /// K(t) and K(t+h); pass nullptr for both to run the constant K = 1
    /// scheme, or the same frame twice for static capacity.
    void advance(Field2D& u, const CapacityFrame* capacity_now,
                 const CapacityFrame* capacity_next, long step_index);

    std::size_t line_capacity() const { return line_capacity_; }
    std::size_t workspace_max_buffer_cells() const;
    int threads() const { return threads_; }

private:
    void sweep_half_diffusion(Field2D& u, Axis axis, StepWorkspace& ws, int line) const;
    void sweep_full_logistic(Field2D& u, Axis axis, const CapacityFrame* cap_now,
                             const CapacityFrame* cap_next, StepWorkspace& ws,
                             int line) const;
    void run_lines(int line_count, const std::function<void(int, StepWorkspace&)>& body);

    const Segmentation& seg_;
    GridSpec grid_;
    SolverParams params_;
    int threads_;
    std::size_t line_capacity_;
    std::vector<StepWorkspace> workspaces_;  // one per thread
};

/// Convenience wrapper matching the single-step call shape used in tests.
Field2D godunov_step_2d(const Field2D& u, const Segmentation& seg,
                        const CapacityFrame& capacity_now,
                        const CapacityFrame& capacity_next,
                        const SolverParams& params, long step_index);

}  // namespace kpp
