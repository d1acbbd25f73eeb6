#pragma once

#include "ocm/domain.hpp"
#include "ocm/ext_real.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace ocm {

/// Tensor lattice: strictly increasing sample coordinates per axis. Nodes are
/// numbered row-major (last axis fastest).
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(std::vector<std::vector<double>> axes);
    /// nodes[d] equispaced coordinates spanning the box (endpoints included).
    static Lattice uniform(const Box& box, const std::vector<std::size_t>& nodes);

    std::size_t dim() const { return axes_.size(); }
    std::size_t size() const { return size_; }
    const std::vector<double>& axis(std::size_t d) const { return axes_[d]; }
    const std::vector<std::vector<double>>& axes() const { return axes_; }

    std::vector<std::size_t> multi_index(std::size_t node) const;
    std::size_t node(std::span<const std::size_t> idx) const;
    Point point(std::size_t node) const;

    /// Nodes at Chebyshev index distance exactly 1 (the 3^n - 1 stencil, clipped).
    std::vector<std::size_t> stencil(std::size_t node) const;

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.axes_ == b.axes_; }

private:
    std::vector<std::vector<double>> axes_;
    std::size_t size_ = 0;
};

/// Extended-real samples on a lattice with a skeleton mask.
///
/// codim(i) == 0 marks an ordinary node; codim(i) = k > 0 marks a node on the
/// skeleton lying on k face orientations at once. A masked node may carry
/// "ghost" values: the one-sided limits of the function from the open regions
/// adjacent to the node.
class GridFn {
public:
    GridFn() = default;
    GridFn(Lattice lattice, std::vector<ExtReal> values, std::vector<std::uint8_t> codim = {});

    static GridFn sample(const Lattice& lattice, const std::function<double(std::span<const double>)>& f);
    static GridFn constant(const Lattice& lattice, ExtReal v);

    const Lattice& lattice() const { return lattice_; }
    std::size_t size() const { return values_.size(); }

    ExtReal operator[](std::size_t i) const { return values_[i]; }
    ExtReal& operator[](std::size_t i) { return values_[i]; }
    const std::vector<ExtReal>& values() const { return values_; }

    std::uint8_t codim(std::size_t i) const { return codim_[i]; }
    bool masked(std::size_t i) const { return codim_[i] > 0; }
    const std::vector<std::uint8_t>& codims() const { return codim_; }
    void set_codim(std::size_t i, std::uint8_t c) { codim_[i] = c; }

    bool has_ghosts() const { return !ghost_offsets_.empty(); }
    std::span<const ExtReal> ghosts(std::size_t i) const;
    /// Replaces all ghost data; ghosts[i] must be empty for unmasked nodes.
    void set_ghosts(const std::vector<std::vector<ExtReal>>& ghosts);

    /// Copy with every value and ghost negated (mask unchanged).
    GridFn negated() const;
    /// Same lattice, mask and ghosts, new node values.
    GridFn with_values(std::vector<ExtReal> values) const;

    /// Exact equality of values, mask and ghosts.
    friend bool operator==(const GridFn& a, const GridFn& b);

private:
    Lattice lattice_;
    std::vector<ExtReal> values_;
    std::vector<std::uint8_t> codim_;
    std::vector<std::uint32_t> ghost_offsets_;  // size()+1 entries, or empty
    std::vector<ExtReal> ghost_values_;
};

/// CSV: header "x1,...,xn,value,mask", one row per node; infinities as inf/-inf;
/// mask is the codimension (0 = off the skeleton). Ghost values are not serialised.
void write_csv(std::ostream& os, const GridFn& f);
/// Reads the format above; the lattice is reconstructed from the distinct
/// coordinates per axis. Throws std::invalid_argument on malformed input.
GridFn read_csv(std::istream& is);

} // namespace ocm
