#include "kpp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kpp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

}  // namespace

GridData load_grid_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ":1: missing header");
    GridData data;
    {
        std::istringstream hs(line);
        if (!(hs >> data.grid.nx >> data.grid.ny >> data.grid.dx))
            throw ParseError(path + ":1: expected header `nx ny dx`");
    }
    try {
        data.grid.validate();
    } catch (const std::exception& e) {
        throw ParseError(path + ":1: " + e.what());
    }
    data.values.reserve(data.grid.cells());
    int line_no = 1;
    for (int row = 0; row < data.grid.ny; ++row) {
        if (!std::getline(in, line))
            throw ParseError(path + ":" + std::to_string(line_no + 1) + ": missing row " +
                             std::to_string(row + 1));
        ++line_no;
        std::istringstream ls(line);
        for (int col = 0; col < data.grid.nx; ++col) {
            double v;
            if (!(ls >> v))
                throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(data.grid.nx) + " values");
            if (!std::isfinite(v))
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": non-finite value");
            data.values.push_back(v);
        }
        double extra;
        if (ls >> extra)
            throw ParseError(path + ":" + std::to_string(line_no) + ": row has more than " +
                             std::to_string(data.grid.nx) + " values");
    }
    return data;
}

void write_grid_file(const std::string& path, const GridSpec& grid,
                     std::span<const double> values) {
    if (values.size() != grid.cells())
        throw std::invalid_argument("write_grid_file: value count does not match grid");
    std::ofstream out = open_output(path);
    out << grid.nx << ' ' << grid.ny << ' ' << format_double(grid.dx) << '\n';
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i) out << ' ';
            out << format_double(values[std::size_t(j) * grid.nx + i]);
        }
        out << '\n';
    }
}

MapMask load_mask_file(const std::string& path) {
    GridData data = load_grid_file(path);
    MapMask mask;
    mask.grid = data.grid;
    mask.habitable.reserve(data.values.size());
    for (double v : data.values) {
        if (v != 0.0 && v != 1.0)
            throw ParseError(path + ": mask values must be 0 or 1");
        mask.habitable.push_back(v != 0.0 ? 1 : 0);
    }
    return mask;
}

CapacityFrame load_capacity_file(const std::string& path, double time) {
    GridData data = load_grid_file(path);
    for (double v : data.values)
        if (v < 0.0 || v > 1.0)
            throw ParseError(path + ": capacity values must lie in [0,1]");
    return {data.grid, time, std::move(data.values)};
}

Field2D load_field_file(const std::string& path) {
    GridData data = load_grid_file(path);
    Field2D f;
    f.grid = data.grid;
    f.values = std::move(data.values);
    return f;
}

void write_snapshot_csv(const Snapshot& snap, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "time,nx,ny,dx\n";
    out << format_double(snap.time) << ',' << snap.field.grid.nx << ','
        << snap.field.grid.ny << ',' << format_double(snap.field.grid.dx) << '\n';
    for (int j = 0; j < snap.field.grid.ny; ++j) {
        for (int i = 0; i < snap.field.grid.nx; ++i) {
            if (i) out << ',';
            out << format_double(snap.field.at(i, j));
        }
        out << '\n';
    }
}

Snapshot read_snapshot_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || line != "time,nx,ny,dx")
        throw ParseError(path + ":1: bad snapshot header");
    if (!std::getline(in, line)) throw ParseError(path + ":2: missing metadata row");
    Snapshot snap;
    {
        std::istringstream ms(line);
        char c;
        if (!(ms >> snap.time >> c >> snap.field.grid.nx >> c >> snap.field.grid.ny >>
              c >> snap.field.grid.dx))
            throw ParseError(path + ":2: bad metadata row");
    }
    snap.field.grid.validate();
    snap.field.values.reserve(snap.field.grid.cells());
    for (int j = 0; j < snap.field.grid.ny; ++j) {
        if (!std::getline(in, line))
            throw ParseError(path + ": missing data row " + std::to_string(j + 1));
        std::istringstream ls(line);
        std::string cell;
        for (int i = 0; i < snap.field.grid.nx; ++i) {
            if (!std::getline(ls, cell, ','))
                throw ParseError(path + ": short data row " + std::to_string(j + 1));
            snap.field.values.push_back(std::stod(cell));
        }
    }
    return snap;
}

void write_snapshot_pgm(const Snapshot& snap, const std::string& path) {
    std::ofstream out = open_output(path);
    const auto& g = snap.field.grid;
    out << "P2\n" << g.nx << ' ' << g.ny << "\n255\n";
    const double norm = 255.0 / std::log(11.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double u = std::max(0.0, snap.field.at(i, j));
            int gray = int(std::lround(norm * std::log1p(10.0 * u)));
            gray = std::min(255, std::max(0, gray));
            if (i) out << ' ';
            out << gray;
        }
        out << '\n';
    }
}

void write_front_trace(const FrontTrace& trace, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "t,x_half,velocity\n";
    const auto& s = trace.samples;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double v = 0.0;
        if (s.size() >= 2) {
            const std::size_t lo = (i == 0) ? 0 : i - 1;
            const std::size_t hi = (i + 1 == s.size()) ? i : i + 1;
            v = (s[hi].x_half - s[lo].x_half) / (s[hi].t - s[lo].t);
        }
        out << format_double(s[i].t) << ',' << format_double(s[i].x_half) << ','
            << format_double(v) << '\n';
    }
}

std::vector<std::pair<double, std::string>> load_frame_manifest(const std::string& path) {
    std::ifstream in = open_input(path);
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<std::pair<double, std::string>> frames;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double t;
        std::string p;
        if (!(ls >> t >> p))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected `<time> <path>`");
        if (!frames.empty() && !(frames.back().first < t))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": frame times must strictly increase");
        std::filesystem::path fp(p);
        if (fp.is_relative()) fp = base / fp;
        frames.emplace_back(t, fp.string());
    }
    if (frames.empty()) throw ParseError(path + ": manifest has no frames");
    return frames;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ParseError("config: bad boolean for " + key + ": " + v);
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "h") cfg.h = std::stod(value);
    else if (key == "dx") cfg.dx = std::stod(value);
    else if (key == "beta") cfg.beta = std::stod(value);
    else if (key == "nu") cfg.nu = std::stod(value);
    else if (key == "fr") cfg.fr = std::stod(value);
    else if (key == "smooth_l") cfg.smooth_half_width = std::stoi(value);
    else if (key == "regularize") cfg.regularize = parse_bool(value, key);
    else if (key == "alternate") cfg.alternate_directions = parse_bool(value, key);
    else if (key == "smooth") cfg.smooth = parse_bool(value, key);
    else if (key == "t_start") cfg.t_start = std::stod(value);
    else if (key == "t_end") cfg.t_end = std::stod(value);
    else if (key == "snapshot_every") cfg.snapshot_every = std::stod(value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "mask") cfg.mask_path = value;
    else if (key == "frames") cfg.frames_path = value;
    else if (key == "capacity") cfg.capacity_path = value;
    else if (key == "init") cfg.init_path = value;
    else if (key == "init_shape") cfg.init_shape = value;
    else if (key == "init_x") cfg.init_x = std::stod(value);
    else if (key == "init_y") cfg.init_y = std::stod(value);
    else if (key == "init_width") cfg.init_width = std::stod(value);
    else if (key == "init_amplitude") cfg.init_amplitude = std::stod(value);
    else if (key == "nx") cfg.nx = std::stoi(value);
    else if (key == "ny") cfg.ny = std::stoi(value);
    else if (key == "threads") cfg.threads = std::stoi(value);
    else throw ParseError("config: unknown key: " + key);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in = open_input(path);
    const auto base = std::filesystem::path(path).parent_path();
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        try {
            apply_config_entry(cfg, key, value);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    // Paths in a config file are relative to the file itself.
    for (std::string* p : {&cfg.mask_path, &cfg.frames_path, &cfg.capacity_path,
                           &cfg.init_path}) {
        if (p->empty()) continue;
        std::filesystem::path fp(*p);
        if (fp.is_relative()) *p = (base / fp).string();
    }
    return cfg;
}

void RunConfig::validate() const {
    if (scenario.empty()) throw std::invalid_argument("config: scenario is required");
    if (!(t_end > t_start)) throw std::invalid_argument("config: need t_end > t_start");
    if (snapshot_every < 0.0)
        throw std::invalid_argument("config: snapshot period must be > 0");
    for (const std::string& p : {mask_path, frames_path, capacity_path, init_path})
        if (!p.empty() && !std::filesystem::exists(p))
            throw std::invalid_argument("config: referenced file does not exist: " + p);
}

}  // namespace kpp
