#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kpp/domain.hpp"
#include "oracles.hpp"

using namespace kpp;

namespace {

MapMask make_mask(GridSpec g, std::vector<std::uint8_t> cells) {
    return MapMask{g, std::move(cells)};
}

MapMask random_mask(GridSpec g, std::mt19937& rng, double land_prob) {
    std::bernoulli_distribution land(land_prob);
    MapMask m{g, std::vector<std::uint8_t>(g.cells())};
    for (auto& c : m.habitable) c = land(rng) ? 1 : 0;
    return m;
}

bool same_segments(const Segmentation& a, const Segmentation& b) {
    return a.rows == b.rows && a.cols == b.cols;
}

}  // namespace

TEST_CASE("GridSpec validation") {
    CHECK_NOTHROW((GridSpec{1, 1, 0.5}).validate());
    CHECK_THROWS_AS((GridSpec{0, 3, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{3, 0, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{3, 3, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{3, 3, -1.0}).validate(), std::invalid_argument);
}

TEST_CASE("all-water mask yields an empty segmentation") {
    MapMask m{GridSpec{4, 4, 1.0}, std::vector<std::uint8_t>(16, 0)};
    auto seg = segment_mask(m);
    REQUIRE(seg.rows.size() == 4);
    REQUIRE(seg.cols.size() == 4);
    for (const auto& r : seg.rows) CHECK(r.empty());
    for (const auto& c : seg.cols) CHECK(c.empty());
    CHECK(seg.habitable_cells() == 0);
}

TEST_CASE("run-length pattern in a single row") {
    // Columns 0-based: land at 1,2 and 4.
    auto m = make_mask(GridSpec{5, 1, 1.0}, {0, 1, 1, 0, 1});
    auto seg = segment_mask(m);
    REQUIRE(seg.rows.size() == 1);
    CHECK(seg.rows[0] == std::vector<Segment>{{1, 2}, {4, 4}});
    CHECK(seg.cols[0].empty());
    CHECK(seg.cols[1] == std::vector<Segment>{{0, 0}});
    CHECK(seg.habitable_cells() == 3);
}

TEST_CASE("fully habitable rectangle has one segment per line") {
    GridSpec g{7, 3, 1.0};
    MapMask m{g, std::vector<std::uint8_t>(g.cells(), 1)};
    auto seg = segment_mask(m);
    for (const auto& r : seg.rows) {
        REQUIRE(r.size() == 1);
        CHECK(r[0] == Segment{0, 6});
    }
    for (const auto& c : seg.cols) {
        REQUIRE(c.size() == 1);
        CHECK(c[0] == Segment{0, 2});
    }
}

TEST_CASE("random masks agree with a brute-force scan") {
    std::mt19937 rng(321u);
    GridSpec g{50, 100, 1.0};
    for (double p : {0.1, 0.5, 0.9}) {
        auto m = random_mask(g, rng, p);
        auto seg = segment_mask(m);
        auto ref = oracles::brute_force_segments(m);
        CHECK(same_segments(seg, ref));

        // Row and column segment lengths both cover exactly the habitable set.
        std::size_t land = 0;
        for (auto c : m.habitable) land += c;
        CHECK(seg.habitable_cells() == land);
        std::size_t col_total = 0;
        for (const auto& col : seg.cols)
            for (const auto& s : col) col_total += std::size_t(s.length());
        CHECK(col_total == land);

        // Segments within each line are sorted, disjoint, non-empty.
        for (Axis axis : {Axis::X, Axis::Y}) {
            const int lines = axis == Axis::X ? g.ny : g.nx;
            for (int l = 0; l < lines; ++l) {
                int prev_end = -2;
                for (const auto& s : seg.line(axis, l)) {
                    CHECK(s.start <= s.end);
                    CHECK(s.start > prev_end + 1);
                    prev_end = s.end;
                }
            }
        }
    }
}

TEST_CASE("segment_mask is deterministic") {
    std::mt19937 rng(99u);
    auto m = random_mask(GridSpec{23, 17, 1.0}, rng, 0.6);
    CHECK(same_segments(segment_mask(m), segment_mask(m)));
}

TEST_CASE("extract_segment pads with zero ghosts") {
    GridSpec g{5, 2, 1.0};
    Field2D f(g);
    f.at(1, 0) = 2.0;
    f.at(2, 0) = 3.0;
    f.at(3, 0) = 4.0;
    SUBCASE("length-3 segment") {
        auto v = extract_segment(f, Axis::X, 0, Segment{1, 3});
        CHECK(v == std::vector<double>{0.0, 2.0, 3.0, 4.0, 0.0});
    }
    SUBCASE("single-cell segment") {
        auto v = extract_segment(f, Axis::X, 0, Segment{2, 2});
        CHECK(v == std::vector<double>{0.0, 3.0, 0.0});
    }
    SUBCASE("column extraction") {
        f.at(1, 1) = -7.0;
        auto v = extract_segment(f, Axis::Y, 1, Segment{0, 1});
        CHECK(v == std::vector<double>{0.0, 2.0, -7.0, 0.0});
    }
}

TEST_CASE("writeback of extract is the identity on interior cells") {
    std::mt19937 rng(5u);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    GridSpec g{9, 6, 1.0};
    Field2D f(g);
    for (auto& v : f.values) v = val(rng);
    Field2D copy = f;
    for (Axis axis : {Axis::X, Axis::Y}) {
        Segment s{2, 5};
        const int line = 3;
        auto padded = extract_segment(f, axis, line, s);
        padded[0] = 123.0;  // ghosts must not be written back
        padded[padded.size() - 1] = 456.0;
        writeback_segment(f, axis, line, s, padded);
        CHECK(f.values == copy.values);
    }
}

TEST_CASE("capacity segments pad with full-capacity ghosts") {
    GridSpec g{4, 1, 1.0};
    CapacityFrame frame{g, 0.0, {0.3, 0.5, 0.9, 0.0}};
    auto v = extract_capacity_segment(frame, Axis::X, 0, Segment{1, 2});
    CHECK(v == std::vector<double>{1.0, 0.5, 0.9, 1.0});

    CapacityFrame ones{g, 0.0, {1.0, 1.0, 1.0, 1.0}};
    auto w = extract_capacity_segment(ones, Axis::X, 0, Segment{0, 3});
    CHECK(w == std::vector<double>(6, 1.0));
}

TEST_CASE("capacity/mask consistency check") {
    GridSpec g{3, 1, 1.0};
    MapMask m{g, {1, 0, 1}};
    auto check = [&](std::vector<double> k) {
        check_capacity_consistent(m, CapacityFrame{g, 0.0, std::move(k)});
    };
    CHECK_NOTHROW(check({0.5, 0.0, 1.0}));
    // K = 0 on land
    CHECK_THROWS_AS(check({0.0, 0.0, 1.0}), std::invalid_argument);
    // K > 0 on water
    CHECK_THROWS_AS(check({0.5, 0.1, 1.0}), std::invalid_argument);
    // K > 1
    CHECK_THROWS_AS(check({1.5, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("enforce_water_zero zeroes exactly the water cells") {
    GridSpec g{3, 2, 1.0};
    MapMask m{g, {1, 0, 1, 0, 1, 0}};
    Field2D f(g, 0.25);
    CHECK(enforce_water_zero(f, m) == 3);
    CHECK(f.values == std::vector<double>{0.25, 0.0, 0.25, 0.0, 0.25, 0.0});
    CHECK(enforce_water_zero(f, m) == 0);
}
