#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace kpp {

/// Uniform lattice. A single spacing serves both directions (dx = dy).
struct GridSpec {
    int nx = 0;   // columns
    int ny = 0;   // rows
    double dx = 0.0;

    bool operator==(const GridSpec&) const = default;
    std::size_t cells() const { return std::size_t(nx) * std::size_t(ny); }
    void validate() const;
};

/// Population density u on a grid, row-major, row 0 = northernmost row.
struct Field2D {
    GridSpec grid;
    std::vector<double> values;

    Field2D() = default;
    Field2D(GridSpec g, double fill = 0.0) : grid(g), values(g.cells(), fill) {}

    double& at(int ix, int iy) { return values[std::size_t(iy) * grid.nx + ix]; }
    double at(int ix, int iy) const { return values[std::size_t(iy) * grid.nx + ix]; }
};

/// Carrying capacity K(x) at one instant: 0 on water, (0,1] on land.
struct CapacityFrame {
    GridSpec grid;
    double time = 0.0;
    std::vector<double> values;

    double at(int ix, int iy) const { return values[std::size_t(iy) * grid.nx + ix]; }
};

/// Habitability raster: 1 = land, 0 = water.
struct MapMask {
    GridSpec grid;
    std::vector<std::uint8_t> habitable;

    bool at(int ix, int iy) const { return habitable[std::size_t(iy) * grid.nx + ix] != 0; }
};

/// Maximal run of habitable cells along one grid line, inclusive 0-based ends.
struct Segment {
    int start = 0;
    int end = 0;
    int length() const { return end - start + 1; }
    bool operator==(const Segment&) const = default;
};

enum class Axis { X, Y };  // X: along a row (varying column), Y: along a column

/// Habitable segments per row and per column (compressed map storage).
struct Segmentation {
    std::vector<std::vector<Segment>> rows;  // size ny, segments along x
    std::vector<std::vector<Segment>> cols;  // size nx, segments along y

    const std::vector<Segment>& line(Axis axis, int line_index) const {
        return axis == Axis::X ? rows[line_index] : cols[line_index];
    }
    std::size_t habitable_cells() const;
};

Segmentation segment_mask(const MapMask& mask);

/// K > 0 on land and K == 0 on water must agree with the mask.
void check_capacity_consistent(const MapMask& mask, const CapacityFrame& frame);

/// Zeroes u on water cells; returns the number of cells changed.
std::size_t enforce_water_zero(Field2D& field, const MapMask& mask);

/// Segment values with one zero ghost cell prepended and appended
/// (u = 0 Dirichlet ends). out must hold seg.length() + 2 values.
void extract_segment(const Field2D& field, Axis axis, int line_index,
                     const Segment& seg, std::span<double> out);
std::vector<double> extract_segment(const Field2D& field, Axis axis,
                                    int line_index, const Segment& seg);

/// As above but ghosts are set to 1 (full capacity at segment ends).
void extract_capacity_segment(const CapacityFrame& frame, Axis axis, int line_index,
                              const Segment& seg, std::span<double> out);
std::vector<double> extract_capacity_segment(const CapacityFrame& frame, Axis axis,
                                             int line_index, const Segment& seg);

/// Writes the interior of a padded segment vector back into the field.
void writeback_segment(Field2D& field, Axis axis, int line_index,
                       const Segment& seg, std::span<const double> padded);

}  // namespace kpp
