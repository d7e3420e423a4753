#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kpp/linalg.hpp"
#include "oracles.hpp"

using kpp::TridiagSystem;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Residual of the tridiagonal system at a candidate solution.
double residual(const TridiagSystem& sys, const std::vector<double>& x) {
    double m = 0.0;
    for (std::size_t i = 0; i < sys.n; ++i) {
        double r = sys.diag[i] * x[i] - sys.rhs[i];
        if (i > 0) r += sys.sub * x[i - 1];
        if (i + 1 < sys.n) r += sys.sup * x[i + 1];
        m = std::max(m, std::abs(r));
    }
    return m;
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
    TridiagSystem sys{3, 0.0, 0.0, {1.0, 1.0, 1.0}, {2.0, -3.0, 5.0}};
    auto x = kpp::solve_tridiagonal(sys);
    CHECK(x == std::vector<double>{2.0, -3.0, 5.0});
}

TEST_CASE("n = 1 degenerates to scalar division") {
    TridiagSystem sys{1, 0.0, 0.0, {4.0}, {2.0}};
    auto x = kpp::solve_tridiagonal(sys);
    CHECK(x.size() == 1);
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("implicit-step matrix shape agrees with dense elimination") {
    // n = 3, diagonal 3.5, off-diagonals -1.25: the interior matrix produced
    // by the semi-implicit update at k = 2.5, h = 1, u near 0.
    TridiagSystem sys{3, -1.25, -1.25, {3.5, 3.5, 3.5}, {1.0, 0.0, 0.0}};
    auto x = kpp::solve_tridiagonal(sys);
    auto ref = oracles::dense_tridiag_solve(sys);
    CHECK(max_abs_diff(x, ref) < 1e-12);
    CHECK(residual(sys, x) < 1e-12);
}

TEST_CASE("moderate system, n = 50") {
    std::vector<double> rhs(50);
    for (std::size_t i = 0; i < 50; ++i) rhs[i] = std::sin(0.37 * double(i));
    TridiagSystem sys{50, -1.25, -1.25, std::vector<double>(50, 3.5), rhs};
    auto x = kpp::solve_tridiagonal(sys);
    auto ref = oracles::dense_tridiag_solve(sys);
    CHECK(max_abs_diff(x, ref) < 1e-12);
}

TEST_CASE("random diagonally dominant systems match the dense solver") {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> off(-2.0, 2.0);
    std::uniform_real_distribution<double> bump(0.1, 3.0);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_int_distribution<std::size_t> size(1, 200);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = size(rng);
        const double sub = off(rng);
        const double sup = off(rng);
        const double floor = std::abs(sub) + std::abs(sup);
        std::vector<double> diag(n), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double sign = (rng() & 1u) ? 1.0 : -1.0;
            diag[i] = sign * (floor + bump(rng));
            rhs[i] = val(rng);
        }
        TridiagSystem sys{n, sub, sup, std::move(diag), std::move(rhs)};
        CAPTURE(trial);
        auto x = kpp::solve_tridiagonal(sys);
        auto ref = oracles::dense_tridiag_solve(sys);
        double scale = 0.0;
        for (double v : ref) scale = std::max(scale, std::abs(v));
        CHECK(max_abs_diff(x, ref) < 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("strictly_dominant reflects the row criterion") {
    TridiagSystem good{3, -1.25, -1.25, {3.5, 3.5, 3.5}, {0, 0, 0}};
    CHECK(good.strictly_dominant());
    TridiagSystem bad{3, -1.25, -1.25, {3.5, 2.5, 3.5}, {0, 0, 0}};
    CHECK_FALSE(bad.strictly_dominant());
}

TEST_CASE("vanishing pivot raises SingularSystemError") {
    // First elimination step drives the second pivot to zero.
    TridiagSystem sys{2, 1.0, 1.0, {1.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(kpp::solve_tridiagonal(sys), kpp::SingularSystemError);
}

TEST_CASE("mismatched array lengths are rejected") {
    CHECK_THROWS_AS(TridiagSystem(3, 0.0, 0.0, {1.0, 1.0}, {1.0, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(TridiagSystem(0, 0.0, 0.0, {}, {}), std::invalid_argument);
}

TEST_CASE("second difference examples") {
    SUBCASE("all zeros") {
        std::vector<double> u{0.0, 0.0, 0.0};
        CHECK(kpp::apply_second_difference(u) == std::vector<double>{0.0, 0.0, 0.0});
    }
    SUBCASE("constant interior sees the zero boundary") {
        std::vector<double> u{1.0, 1.0, 1.0};
        CHECK(kpp::apply_second_difference(u) ==
              std::vector<double>{-1.0, 0.0, -1.0});
    }
    SUBCASE("linear ramp") {
        std::vector<double> u{1.0, 2.0, 3.0, 4.0};
        CHECK(kpp::apply_second_difference(u) ==
              std::vector<double>{0.0, 0.0, 0.0, -5.0});
    }
}

TEST_CASE("second difference is symmetric and has row sums <= 0") {
    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    const std::size_t n = 12;
    // Build the matrix column by column and check A = A^T; row sums are 0 in
    // the interior and -1 at the ends (zero Dirichlet ghosts).
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> e(n, 0.0);
        e[c] = 1.0;
        auto col = kpp::apply_second_difference(e);
        for (std::size_t r = 0; r < n; ++r) a[r][c] = col[r];
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) CHECK(a[r][c] == a[c][r]);
    std::vector<double> ones(n, 1.0);
    auto sums = kpp::apply_second_difference(ones);
    for (std::size_t r = 1; r + 1 < n; ++r) CHECK(sums[r] == 0.0);
    CHECK(sums[0] == -1.0);
    CHECK(sums[n - 1] == -1.0);
    // Sanity: action on random data equals the explicit matrix product.
    std::vector<double> u(n);
    for (auto& v : u) v = val(rng);
    auto lhs = kpp::apply_second_difference(u);
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += a[r][c] * u[c];
        CHECK(lhs[r] == doctest::Approx(acc).epsilon(1e-14));
    }
}
