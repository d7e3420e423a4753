#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace kpp {

struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tridiagonal system with constant sub/super diagonals. The steppers only
/// ever build strictly diagonally dominant systems, so the solver does no
/// pivoting.
struct TridiagSystem {
    std::size_t n = 0;
    double sub = 0.0;
    double sup = 0.0;
    std::vector<double> diag;
    std::vector<double> rhs;

    TridiagSystem(std::size_t n_, double sub_, double sup_,
                  std::vector<double> diag_, std::vector<double> rhs_);

    bool strictly_dominant() const;
};

/// Thomas algorithm. Throws SingularSystemError when a pivot falls below
/// 1e-14 * max|diag|.
std::vector<double> solve_tridiagonal(const TridiagSystem& sys);

/// In-place variant over caller-owned storage: diag and rhs are consumed as
/// scratch, the solution lands in rhs. Used by the steppers to stay within
/// the per-line workspace budget.
void solve_tridiagonal_inplace(std::size_t n, double sub, double sup,
                               std::span<double> diag, std::span<double> rhs);

/// Second-difference operator with Dirichlet u=0 outside both ends:
/// out[i] = u[i-1] - 2 u[i] + u[i+1], missing neighbors taken as 0.
std::vector<double> apply_second_difference(std::span<const double> u);

}  // namespace kpp
