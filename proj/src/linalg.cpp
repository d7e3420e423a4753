#include "kpp/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace kpp {

TridiagSystem::TridiagSystem(std::size_t n_, double sub_, double sup_,
                             std::vector<double> diag_, std::vector<double> rhs_)
    : n(n_), sub(sub_), sup(sup_), diag(std::move(diag_)), rhs(std::move(rhs_)) {
    if (n < 1) throw std::invalid_argument("TridiagSystem: n must be >= 1");
    if (diag.size() != n || rhs.size() != n)
        throw std::invalid_argument("TridiagSystem: diag/rhs must have length n");
}

bool TridiagSystem::strictly_dominant() const {
    const double off = std::abs(sub) + std::abs(sup);
    for (double d : diag)
        if (!(std::abs(d) > off)) return false;
    return true;
}

void solve_tridiagonal_inplace(std::size_t n, double sub, double sup,
                               std::span<double> diag, std::span<double> rhs) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(diag[i]));
    const double pivot_floor = 1e-14 * max_diag;

    // Forward elimination; diag[i] is reused to hold the scaled super-diagonal.
    double piv = diag[0];
    if (std::abs(piv) <= pivot_floor)
        throw SingularSystemError("tridiagonal solve: near-zero pivot at row 0");
    diag[0] = sup / piv;
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - sub * diag[i - 1];
        if (std::abs(piv) <= pivot_floor)
            throw SingularSystemError("tridiagonal solve: near-zero pivot at row " +
                                      std::to_string(i));
        diag[i] = sup / piv;
        rhs[i] = (rhs[i] - sub * rhs[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= diag[i] * rhs[i + 1];
}

std::vector<double> solve_tridiagonal(const TridiagSystem& sys) {
    std::vector<double> diag = sys.diag;
    std::vector<double> x = sys.rhs;
    solve_tridiagonal_inplace(sys.n, sys.sub, sys.sup, diag, x);
    return x;
}

std::vector<double> apply_second_difference(std::span<const double> u) {
    const std::size_t n = u.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = (i > 0) ? u[i - 1] : 0.0;
        const double right = (i + 1 < n) ? u[i + 1] : 0.0;
        out[i] = left - 2.0 * u[i] + right;
    }
    return out;
}

}  // namespace kpp
