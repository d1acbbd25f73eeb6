#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace ocm {

using Point = std::vector<double>;

/// Closed axis-aligned box [lower, upper].
struct Box {
    Point lower;
    Point upper;

    std::size_t dim() const { return lower.size(); }
    double width(std::size_t d) const { return upper[d] - lower[d]; }
    double diameter() const;
    double volume() const;
    Point center() const;
    bool contains(std::span<const double> x) const;

    /// Throws DomainError when lower_i > upper_i or dimensions disagree.
    static Box make(Point lower, Point upper);
};

/// Axis-aligned face patch {x : x_axis == value, x in extent}.
struct Face {
    std::size_t axis;
    double value;
    Box extent;
};

/// Bounding box tiled by a uniform grid of cells; each cell is subdivided by
/// its own per-axis breakpoints into a tensor grid of subcells.
class CellPartition {
public:
    const Box& bounds() const { return bounds_; }
    std::size_t dim() const { return bounds_.dim(); }
    const std::vector<std::size_t>& cells_per_axis() const { return cells_per_axis_; }
    std::size_t cell_count() const { return cells_.size(); }
    const Box& cell(std::size_t c) const { return cells_[c]; }

    /// Per-axis breakpoints of cell c (first = lower face, last = upper face).
    const std::vector<std::vector<double>>& breakpoints(std::size_t c) const { return breaks_[c]; }
    /// Subcells per axis in cell c.
    std::vector<std::size_t> splits(std::size_t c) const;

    std::size_t subcell_count() const { return offsets_.back(); }
    Box subcell(std::size_t s) const;
    Point subcell_center(std::size_t s) const;
    std::size_t cell_of_subcell(std::size_t s) const;
    /// Subcells of cell c occupy [first_subcell(c), first_subcell(c+1)).
    std::size_t first_subcell(std::size_t c) const { return offsets_[c]; }
    std::vector<Box> subcells_of(std::size_t c) const;

    /// Index of a subcell containing x (closed boxes; ties go to the lower index
    /// along each axis). nullopt when x is outside the bounding box.
    std::optional<std::size_t> locate(std::span<const double> x) const;

    /// All subcells whose closure contains x.
    std::vector<std::size_t> subcells_touching(std::span<const double> x) const;

    /// Exact test: x lies on a cell or subcell face (including the outer boundary).
    bool on_skeleton(std::span<const double> x) const;
    /// Number of axes d along which x_d coincides with a breakpoint of a cell
    /// containing x; 0 off the skeleton.
    std::size_t skeleton_codim(std::span<const double> x) const;

    /// Largest subcell diameter.
    double max_subcell_diameter() const;

    // Internal construction; use build_partition / subdivide.
    CellPartition(Box bounds, std::vector<std::size_t> cells_per_axis, std::vector<Box> cells,
                  std::vector<std::vector<std::vector<double>>> breaks);

private:
    Box bounds_;
    std::vector<std::size_t> cells_per_axis_;
    std::vector<std::vector<double>> cell_breaks_;  // per axis, uniform cell grid
    std::vector<Box> cells_;
    std::vector<std::vector<std::vector<double>>> breaks_;  // [cell][axis] -> breakpoints
    std::vector<std::size_t> offsets_;  // cell_count + 1 entries

    std::vector<std::size_t> cell_candidates(std::span<const double> x) const;
};

/// Finite union of axis-aligned face patches: the cell and subcell faces of a partition.
/// Owns a copy of the breakpoint geometry, so it outlives the partition.
class Skeleton {
public:
    explicit Skeleton(const CellPartition& p);

    const std::vector<Face>& faces() const { return faces_; }
    /// Exact membership (tolerance 0).
    bool contains(std::span<const double> x) const;
    std::size_t codim(std::span<const double> x) const;

private:
    CellPartition geometry_;
    std::vector<Face> faces_;
};

/// Uniform grid of cells over bounds. Throws DomainError on a degenerate box
/// or a zero count.
CellPartition build_partition(const Box& bounds, const std::vector<std::size_t>& cells_per_axis);

/// Refines every cell so that each subcell has Euclidean diameter <= delta.
/// Per axis, every subcell interval is split into ceil(width * sqrt(n) / delta)
/// equal parts (the same count for the whole axis of a cell). Conforming cells
/// are left untouched, so the operation is idempotent.
CellPartition subdivide(const CellPartition& p, double delta);

/// Same as subdivide but only for cell c; other cells keep their subdivision.
CellPartition subdivide_cell(const CellPartition& p, std::size_t c, double delta);

Skeleton skeleton_of(const CellPartition& p);

/// per_cell points in every subcell, each at distance >= margin * width_d from
/// the subcell faces along every axis d. Deterministic in (seed, partition).
std::vector<Point> sample_points(const CellPartition& p, std::size_t per_cell, double margin, std::uint64_t seed);

/// Deterministic uniform doubles in [0, 1) from a 64-bit seed stream.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t stream);
    double next();

private:
    std::mt19937_64 engine_;
};

} // namespace ocm
