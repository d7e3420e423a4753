#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "kpp/io.hpp"
#include "kpp/scenarios.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fisher/KPP growth-diffusion solver (semi-implicit Godunov splitting)"};
    // `--h` is the time-step flag, so help must not claim the short `-h`.
    app.set_help_flag("--help", "print this help message and exit");

    std::string scenario, config_path, out_dir, mask, frames, capacity, init;
    double h = 0, dx = 0, beta = 0, nu = 0, fr = 0, t_end = 0, snapshot_every = 0;
    int smooth_l = 0;
    bool no_regularize = false, no_alt = false, smooth = false;

    app.add_option("--scenario", scenario,
                   "wave1d | radial2d | desert | map-run | segment-debug | "
                   "smooth-map | interp-preview");
    app.add_option("--config", config_path, "key=value run configuration file");
    app.add_option("--h", h, "time step (scaled units)");
    app.add_option("--dx", dx, "grid spacing (scaled units)");
    app.add_option("--beta", beta, "regularizer exponent");
    app.add_option("--nu", nu, "sigmoid interpolation exponent");
    app.add_option("--fr", fr, "desert capacity fraction");
    app.add_option("--smooth-L", smooth_l, "low-pass filter half-width (cells)");
    app.add_flag("--no-regularize", no_regularize, "disable the tanh regularizer");
    app.add_flag("--no-alt", no_alt, "disable direction alternation");
    app.add_flag("--smooth", smooth, "low-pass smooth capacity frames");
    app.add_option("--t-end", t_end, "end time (scaled units)");
    app.add_option("--snapshot-every", snapshot_every, "snapshot period (scaled units)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--mask", mask, "habitability mask file");
    app.add_option("--frames", frames, "capacity frame manifest");
    app.add_option("--capacity", capacity, "single capacity map file");
    app.add_option("--init", init, "initial condition grid file");

    CLI11_PARSE(app, argc, argv);

    try {
        kpp::RunConfig cfg;
        if (!config_path.empty()) cfg = kpp::load_config(config_path);
        // Flags override the config file.
        if (!scenario.empty()) cfg.scenario = scenario;
        if (h > 0) cfg.h = h;
        if (dx > 0) cfg.dx = dx;
        if (beta > 0) cfg.beta = beta;
        if (nu > 0) cfg.nu = nu;
        if (fr > 0) cfg.fr = fr;
        if (smooth_l > 0) cfg.smooth_half_width = smooth_l;
        if (no_regularize) cfg.regularize = false;
        if (no_alt) cfg.alternate_directions = false;
        if (smooth) cfg.smooth = true;
        if (t_end != 0) cfg.t_end = t_end;
        if (snapshot_every > 0) cfg.snapshot_every = snapshot_every;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!mask.empty()) cfg.mask_path = mask;
        if (!frames.empty()) cfg.frames_path = frames;
        if (!capacity.empty()) cfg.capacity_path = capacity;
        if (!init.empty()) cfg.init_path = init;
        if (cfg.scenario.empty()) {
            std::cerr << "error: --scenario (or a config with scenario=) is required\n";
            return 2;
        }
        if (const char* env = std::getenv("KPP_THREADS")) {
            const int n = std::atoi(env);
            cfg.threads = n > 0 ? n : int(std::thread::hardware_concurrency());
        }

        const kpp::RunSummary summary = kpp::run_scenario(cfg);
        std::cout << "scenario " << cfg.scenario << " done: t=" << summary.t_final
                  << " steps=" << summary.steps << " min_u=" << summary.u_min
                  << " max_u=" << summary.u_max << " wall=" << summary.wall_seconds
                  << "s\n";
        for (const auto& f : summary.outputs) std::cout << "  wrote " << f << "\n";
        return 0;
    } catch (const kpp::DivergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
