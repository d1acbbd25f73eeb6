#pragma once

#include "ocm/baire.hpp"
#include "ocm/domain.hpp"
#include "ocm/expr.hpp"
#include "ocm/grid_fn.hpp"
#include "ocm/parallel.hpp"
#include "ocm/taylor.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ocm {

/// K-component field that is a polynomial on every subcell of a partition and
/// smooth off the subcell faces.
class PiecewisePoly {
public:
    /// One piece per subcell, in subcell order; each centre must lie in its subcell.
    PiecewisePoly(CellPartition partition, int K, int m, std::vector<TaylorPiece> pieces);

    const CellPartition& partition() const { return partition_; }
    const TaylorBasis& basis() const { return basis_; }
    int K() const { return K_; }
    std::size_t size() const { return pieces_.size(); }
    const TaylorPiece& piece(std::size_t s) const { return pieces_[s]; }
    TaylorPiece& piece(std::size_t s) { return pieces_[s]; }
    Skeleton skeleton() const { return skeleton_of(partition_); }

    /// Jets of the piece of subcell s at x (x may lie anywhere; the polynomial is global).
    void jets(std::size_t s, std::span<const double> x, std::span<double> out) const;
    /// Component values of the piece of subcell s at x.
    void values(std::size_t s, std::span<const double> x, std::span<double> out) const;

private:
    CellPartition partition_;
    int K_;
    TaylorBasis basis_;
    std::vector<TaylorPiece> pieces_;
};

/// T(x, D) applied to the piece of subcell s at x, without skeleton checks.
/// Returns false when F is undefined there.
bool apply_piece(const PdeSystem& sys, const PiecewisePoly& u, std::size_t s, std::span<const double> x,
                 std::span<double> out);

/// T(x, D)u(x); nullopt when x is on the skeleton. Throws DomainError outside the
/// bounding box and EvalUndefined when F is undefined at x.
std::optional<std::vector<double>> apply_operator(const PdeSystem& sys, const PiecewisePoly& u,
                                                  std::span<const double> x);

/// Lattice samples of u, one GridFn per component (see embed_field).
std::vector<GridFn> embed_piecewise(const PiecewisePoly& u, const Lattice& lattice, Exec exec = Exec::Parallel);

/// Lattice samples of the image T(x, D)u, one GridFn per component. Throws
/// EvalUndefined when F is undefined at a node.
std::vector<GridFn> embed_image(const PdeSystem& sys, const PiecewisePoly& u, const Lattice& lattice,
                                Exec exec = Exec::Parallel);

} // namespace ocm
