#pragma once

#include "ocm/domain.hpp"
#include "ocm/multi_index.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ocm {

/// Prescribed derivative values xi_{j,alpha} at a point x0, in the jet layout
/// of PdeSystem (slot = (j-1) * |alphas| + index_of(alpha)).
struct JetPoint {
    Point x0;
    std::vector<double> xi;
};

/// Precomputed derivative structure of polynomials of degree <= m in n variables:
///   D^beta P(x) = sum_{alpha >= beta} c_alpha * alpha!/(alpha-beta)! * (x-x0)^(alpha-beta).
class TaylorBasis {
public:
    TaylorBasis() = default;
    TaylorBasis(int n, int m);

    const MultiIndexSet& alphas() const { return alphas_; }
    int n() const { return alphas_.dimension(); }
    int m() const { return alphas_.max_order(); }

    /// Monomials (x - x0)^gamma for every gamma in the set.
    void monomials(std::span<const double> h, std::span<double> out) const;

    /// All derivatives D^beta of one polynomial with coefficients c (indexed like alphas)
    /// at offset h = x - x0.
    void derivatives(std::span<const double> c, std::span<const double> monos, std::span<double> out) const;

private:
    struct Term {
        std::size_t beta;
        std::size_t alpha;
        std::size_t gamma;
        double weight;  // alpha! / (alpha - beta)!
    };
    MultiIndexSet alphas_;
    std::vector<Term> terms_;
};

/// K polynomials sharing a centre: P_j(x) = sum_alpha c_{j,alpha} (x - x0)^alpha.
struct TaylorPiece {
    Point center;
    std::vector<double> coeffs;  // slot layout, c = xi / alpha!

    /// All jets D^alpha P_j(x), slot layout.
    void jets(const TaylorBasis& basis, std::span<const double> x, std::span<double> out) const;
    /// P_j(x) for every component.
    void values(const TaylorBasis& basis, std::span<const double> x, std::span<double> out) const;
};

/// The Taylor polynomial realising the jet: D^alpha P_j(x0) = xi_{j,alpha}.
TaylorPiece taylor_poly(const TaylorBasis& basis, const JetPoint& jet);

} // namespace ocm
