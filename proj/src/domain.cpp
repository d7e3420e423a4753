#include "kpp/domain.hpp"

#include <cmath>

namespace kpp {

void GridSpec::validate() const {
    if (nx < 1 || ny < 1) throw std::invalid_argument("GridSpec: nx, ny must be >= 1");
    if (!(dx > 0.0)) throw std::invalid_argument("GridSpec: dx must be > 0");
}

std::size_t Segmentation::habitable_cells() const {
    std::size_t total = 0;
    for (const auto& segs : rows)
        for (const auto& s : segs) total += std::size_t(s.length());
    return total;
}

Segmentation segment_mask(const MapMask& mask) {
    mask.grid.validate();
    const int nx = mask.grid.nx, ny = mask.grid.ny;
    Segmentation seg;
    seg.rows.resize(ny);
    seg.cols.resize(nx);
    for (int j = 0; j < ny; ++j) {
        int i = 0;
        while (i < nx) {
            if (!mask.at(i, j)) { ++i; continue; }
            int start = i;
            while (i < nx && mask.at(i, j)) ++i;
            seg.rows[j].push_back({start, i - 1});
        }
    }
    for (int i = 0; i < nx; ++i) {
        int j = 0;
        while (j < ny) {
            if (!mask.at(i, j)) { ++j; continue; }
            int start = j;
            while (j < ny && mask.at(i, j)) ++j;
            seg.cols[i].push_back({start, j - 1});
        }
    }
    return seg;
}

void check_capacity_consistent(const MapMask& mask, const CapacityFrame& frame) {
    if (mask.grid != frame.grid)
        throw std::invalid_argument("mask and capacity frame grids differ");
    const int nx = mask.grid.nx, ny = mask.grid.ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double k = frame.at(i, j);
            if (!std::isfinite(k) || k < 0.0 || k > 1.0)
                throw std::invalid_argument("capacity value outside [0,1] at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            if ((k > 0.0) != mask.at(i, j))
                throw std::invalid_argument("capacity/mask mismatch at (" +
                                            std::to_string(i) + "," + std::to_string(j) +
                                            "): K > 0 must hold exactly on land");
        }
}

std::size_t enforce_water_zero(Field2D& field, const MapMask& mask) {
    if (mask.grid != field.grid)
        throw std::invalid_argument("mask and field grids differ");
    std::size_t changed = 0;
    for (int j = 0; j < mask.grid.ny; ++j)
        for (int i = 0; i < mask.grid.nx; ++i)
            if (!mask.at(i, j) && field.at(i, j) != 0.0) {
                field.at(i, j) = 0.0;
                ++changed;
            }
    return changed;
}

namespace {

void check_segment_range(const GridSpec& g, Axis axis, int line_index, const Segment& seg) {
    const int line_count = (axis == Axis::X) ? g.ny : g.nx;
    const int line_len = (axis == Axis::X) ? g.nx : g.ny;
    if (line_index < 0 || line_index >= line_count)
        throw std::out_of_range("segment line index out of range");
    if (seg.start < 0 || seg.end >= line_len || seg.start > seg.end)
        throw std::out_of_range("segment out of range");
}

}  // namespace

void extract_segment(const Field2D& field, Axis axis, int line_index,
                     const Segment& seg, std::span<double> out) {
    check_segment_range(field.grid, axis, line_index, seg);
    const int n = seg.length();
    out[0] = 0.0;
    out[n + 1] = 0.0;
    if (axis == Axis::X)
        for (int i = 0; i < n; ++i) out[i + 1] = field.at(seg.start + i, line_index);
    else
        for (int i = 0; i < n; ++i) out[i + 1] = field.at(line_index, seg.start + i);
}

std::vector<double> extract_segment(const Field2D& field, Axis axis,
                                    int line_index, const Segment& seg) {
    std::vector<double> out(std::size_t(seg.length()) + 2);
    extract_segment(field, axis, line_index, seg, out);
    return out;
}

void extract_capacity_segment(const CapacityFrame& frame, Axis axis, int line_index,
                              const Segment& seg, std::span<double> out) {
    check_segment_range(frame.grid, axis, line_index, seg);
    const int n = seg.length();
    out[0] = 1.0;
    out[n + 1] = 1.0;
    if (axis == Axis::X)
        for (int i = 0; i < n; ++i) out[i + 1] = frame.at(seg.start + i, line_index);
    else
        for (int i = 0; i < n; ++i) out[i + 1] = frame.at(line_index, seg.start + i);
}

std::vector<double> extract_capacity_segment(const CapacityFrame& frame, Axis axis,
                                             int line_index, const Segment& seg) {
    std::vector<double> out(std::size_t(seg.length()) + 2);
    extract_capacity_segment(frame, axis, line_index, seg, out);
    return out;
}

void writeback_segment(Field2D& field, Axis axis, int line_index,
                       const Segment& seg, std::span<const double> padded) {
    check_segment_range(field.grid, axis, line_index, seg);
    const int n = seg.length();
    if (axis == Axis::X)
        for (int i = 0; i < n; ++i) field.at(seg.start + i, line_index) = padded[i + 1];
    else
        for (int i = 0; i < n; ++i) field.at(line_index, seg.start + i) = padded[i + 1];
}

}  // namespace kpp
