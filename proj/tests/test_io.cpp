#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "kpp/io.hpp"

using namespace kpp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("kpp_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("grid file: 2x2 header and values") {
    TempDir tmp;
    auto p = tmp.file("g.txt");
    write_text(p, "2 2 1.0\n0.1 0.2\n0.3 0.4\n");
    auto g = load_grid_file(p);
    CHECK(g.grid.nx == 2);
    CHECK(g.grid.ny == 2);
    CHECK(g.grid.dx == 1.0);
    CHECK(g.values == std::vector<double>{0.1, 0.2, 0.3, 0.4});
}

TEST_CASE("grid file errors name the offending location") {
    TempDir tmp;
    SUBCASE("wrong cell count") {
        auto p = tmp.file("short.txt");
        write_text(p, "3 2 1.0\n0.1 0.2 0.3\n0.4 0.5\n");
        CHECK_THROWS_AS(load_grid_file(p), ParseError);
    }
    SUBCASE("malformed header") {
        auto p = tmp.file("bad.txt");
        write_text(p, "2 x 1.0\n0.1 0.2\n0.3 0.4\n");
        CHECK_THROWS_AS(load_grid_file(p), ParseError);
    }
    SUBCASE("non-finite value") {
        auto p = tmp.file("nan.txt");
        write_text(p, "2 1 1.0\nnan 0.2\n");
        CHECK_THROWS_AS(load_grid_file(p), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_grid_file(tmp.file("absent.txt")), ParseError);
    }
    SUBCASE("error message carries path and line") {
        auto p = tmp.file("short2.txt");
        write_text(p, "2 2 1.0\n0.1 0.2\n0.3\n");
        try {
            load_grid_file(p);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("short2.txt") != std::string::npos);
            CHECK(msg.find("3") != std::string::npos);
        }
    }
}

TEST_CASE("grid file roundtrip is exact at full printed precision") {
    TempDir tmp;
    std::mt19937 rng(808u);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    GridSpec g{7, 5, 0.4};
    std::vector<double> values(g.cells());
    for (auto& v : values) v = val(rng);
    auto p = tmp.file("rt.txt");
    write_grid_file(p, g, values);
    auto back = load_grid_file(p);
    CHECK(back.grid == g);
    CHECK(back.values == values);
}

TEST_CASE("mask loader enforces 0/1 cells") {
    TempDir tmp;
    auto good = tmp.file("mask.txt");
    write_text(good, "3 1 1.0\n1 0 1\n");
    auto m = load_mask_file(good);
    CHECK(m.habitable == std::vector<std::uint8_t>{1, 0, 1});
    auto bad = tmp.file("maskbad.txt");
    write_text(bad, "3 1 1.0\n1 0.5 1\n");
    CHECK_THROWS_AS(load_mask_file(bad), ParseError);
}

TEST_CASE("capacity loader enforces the [0,1] range") {
    TempDir tmp;
    auto good = tmp.file("cap.txt");
    write_text(good, "2 1 1.0\n0.25 1\n");
    auto f = load_capacity_file(good, 7.5);
    CHECK(f.time == 7.5);
    CHECK(f.values == std::vector<double>{0.25, 1.0});
    auto bad = tmp.file("capbad.txt");
    write_text(bad, "2 1 1.0\n0.25 1.5\n");
    CHECK_THROWS_AS(load_capacity_file(bad), ParseError);
}

TEST_CASE("snapshot CSV roundtrip preserves values exactly") {
    TempDir tmp;
    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    Snapshot snap;
    snap.time = 12.5;
    snap.field = Field2D(GridSpec{6, 4, 0.2});
    for (auto& v : snap.field.values) v = val(rng);
    auto p = tmp.file("snap.csv");
    write_snapshot_csv(snap, p);
    auto back = read_snapshot_csv(p);
    CHECK(back.time == snap.time);
    CHECK(back.field.grid == snap.field.grid);
    CHECK(back.field.values == snap.field.values);

    // Writers are byte-deterministic.
    auto q = tmp.file("snap2.csv");
    write_snapshot_csv(snap, q);
    CHECK(read_text(p) == read_text(q));
}

TEST_CASE("PGM gray levels follow the log transform") {
    TempDir tmp;
    Snapshot snap;
    snap.time = 0.0;
    snap.field = Field2D(GridSpec{3, 1, 1.0});
    snap.field.values = {0.0, 0.5, 1.0};
    auto p = tmp.file("snap.pgm");
    write_snapshot_pgm(snap, p);
    std::ifstream in(p);
    std::string magic;
    int w, hgt, maxval, g0, g1, g2;
    in >> magic >> w >> hgt >> maxval >> g0 >> g1 >> g2;
    CHECK(magic == "P2");
    CHECK(w == 3);
    CHECK(hgt == 1);
    CHECK(maxval == 255);
    CHECK(g0 == 0);
    CHECK(g1 == std::lround(255.0 * std::log(6.0) / std::log(11.0)));
    CHECK(g2 == 255);
}

TEST_CASE("front trace CSV uses centered differences, one-sided at the ends") {
    TempDir tmp;
    FrontTrace trace;
    trace.samples = {{0.0, 1.0}, {1.0, 2.0}, {2.0, 4.0}, {3.0, 5.0}};
    auto p = tmp.file("trace.csv");
    write_front_trace(trace, p);
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x_half,velocity");
    std::vector<double> vel;
    std::string line;
    while (std::getline(in, line)) {
        auto last = line.rfind(',');
        vel.push_back(std::stod(line.substr(last + 1)));
    }
    REQUIRE(vel.size() == 4);
    CHECK(vel[0] == doctest::Approx(1.0).epsilon(1e-12));   // (2-1)/1
    CHECK(vel[1] == doctest::Approx(1.5).epsilon(1e-12));   // (4-1)/2
    CHECK(vel[2] == doctest::Approx(1.5).epsilon(1e-12));   // (5-2)/2
    CHECK(vel[3] == doctest::Approx(1.0).epsilon(1e-12));   // (5-4)/1
}

TEST_CASE("frame manifest: relative paths and strictly increasing times") {
    TempDir tmp;
    write_text(tmp.file("k0.txt"), "2 1 1.0\n0.5 1\n");
    write_text(tmp.file("k1.txt"), "2 1 1.0\n0.7 1\n");
    auto p = tmp.file("frames.txt");
    write_text(p, "0 k0.txt\n10 k1.txt\n");
    auto frames = load_frame_manifest(p);
    REQUIRE(frames.size() == 2);
    CHECK(frames[0].first == 0.0);
    CHECK(frames[1].first == 10.0);
    CHECK(load_capacity_file(frames[0].second).values ==
          std::vector<double>{0.5, 1.0});

    auto bad = tmp.file("frames_bad.txt");
    write_text(bad, "10 k0.txt\n0 k1.txt\n");
    CHECK_THROWS_AS(load_frame_manifest(bad), ParseError);
}

TEST_CASE("config: key=value parsing, comments, relative paths") {
    TempDir tmp;
    write_text(tmp.file("m.txt"), "2 1 1.0\n1 1\n");
    auto p = tmp.file("run.cfg");
    write_text(p,
               "# comment line\n"
               "scenario = desert\n"
               "h = 0.125\n"
               "dx = 0.4\n"
               "fr = 0.02\n"
               "t_end = 40\n"
               "regularize = false\n"
               "smooth = true\n"
               "smooth_l = 5\n"
               "mask = m.txt\n"
               "threads = 3\n");
    auto cfg = load_config(p);
    CHECK(cfg.scenario == "desert");
    CHECK(cfg.h == 0.125);
    CHECK(cfg.dx == 0.4);
    CHECK(cfg.fr == 0.02);
    CHECK(cfg.t_end == 40.0);
    CHECK_FALSE(cfg.regularize);
    CHECK(cfg.smooth);
    CHECK(cfg.smooth_half_width == 5);
    CHECK(cfg.threads == 3);
    CHECK(fs::path(cfg.mask_path).is_absolute());
    CHECK(fs::exists(cfg.mask_path));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config rejects unknown keys and bad values") {
    RunConfig cfg;
    CHECK_THROWS_AS(apply_config_entry(cfg, "no_such_key", "1"), ParseError);
    CHECK_THROWS(apply_config_entry(cfg, "h", "fast"));
    CHECK_THROWS_AS(apply_config_entry(cfg, "regularize", "maybe"), ParseError);
    apply_config_entry(cfg, "beta", "2.5");
    CHECK(cfg.beta == 2.5);
}

TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.scenario = "wave1d";
    cfg.t_end = 10.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.t_end = 10.0;
    cfg.snapshot_every = -2.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.snapshot_every = 0.0;
    cfg.scenario.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.scenario = "wave1d";
    cfg.mask_path = "/no/such/file.txt";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("format_double: 17 significant digits survive a parse roundtrip") {
    std::mt19937_64 rng(4242u);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = val(rng) * std::pow(10.0, int(rng() % 7) - 3);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.0) == "0");
}
