#pragma once

#include "ocm/domain.hpp"
#include "ocm/grid_fn.hpp"
#include "ocm/parallel.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ocm {

// Lower and upper Baire operators on a lattice.
//
// The lattice is treated as a finite topological space. Ordinary nodes are open
// points. The minimal neighbourhood N(x) of a skeleton node x is x itself plus
//   - its ghost points (one-sided limits), when the node carries any, else
//   - N(y) for every stencil neighbour y of strictly lower codimension.
// N is transitive (y in N(x) implies N(y) in N(x)), so
//   I(f)(x) = sup over neighbourhoods V of inf_V f = min over N(x),
//   S(f)(x) = max over N(x),
// and I, S, I∘S are idempotent exactly. Ghost points are open, so the
// operators never change them.

GridFn lower_baire(const GridFn& f, Exec exec = Exec::Parallel);
GridFn upper_baire(const GridFn& f, Exec exec = Exec::Parallel);
/// I(S(f)); the normal lower semicontinuous representative.
GridFn normalize_nls(const GridFn& f, Exec exec = Exec::Parallel);
/// S(I(f)).
GridFn normalize_nus(const GridFn& f, Exec exec = Exec::Parallel);

struct SemicontinuityFlags {
    bool lsc = false;
    bool usc = false;
    bool nlsc = false;
    bool nusc = false;
};

SemicontinuityFlags semicontinuity_classify(const GridFn& f);

/// Minimal neighbourhood of a node: lattice nodes (sorted) and whether the
/// node's own ghosts belong to it (ghosts of every node in the list do).
std::vector<std::size_t> minimal_neighbourhood(const GridFn& f, std::size_t node);

/// Envelope pair (lower nlsc, upper nusc) representing an interval function.
struct EnvelopePair {
    GridFn lower;
    GridFn upper;

    /// lower <= upper + slack at every node, and both finite off the mask.
    bool valid(double slack = 0.0) const;
};

/// Piecewise field over a partition: eval(subcell, x, out) evaluates the
/// piece of that subcell at x (x in the closed subcell) into K outputs.
using PieceEvaluator = std::function<void(std::size_t subcell, std::span<const double> x, std::span<double> out)>;

/// Samples a piecewise field on the lattice, one GridFn per component:
/// off-skeleton nodes get the value of their piece; skeleton nodes get 0 (the
/// filler of the regularisation construction), the skeleton codimension as
/// mask and the adjacent pieces' values as ghosts; then I∘S is applied.
/// Lattice nodes must lie in the partition's bounding box.
std::vector<GridFn> embed_field(const CellPartition& p, const Lattice& lattice, std::size_t K,
                                const PieceEvaluator& eval, Exec exec = Exec::Parallel);

} // namespace ocm
