#include "ocm/piecewise.hpp"

#include "ocm/errors.hpp"

#include <stdexcept>
#include <string>

namespace ocm {

PiecewisePoly::PiecewisePoly(CellPartition partition, int K, int m, std::vector<TaylorPiece> pieces)
    : partition_(std::move(partition)), K_(K),
      basis_(static_cast<int>(partition_.dim()), m), pieces_(std::move(pieces)) {
    if (K < 1) throw std::invalid_argument("PiecewisePoly: K must be positive");
    if (pieces_.size() != partition_.subcell_count())
        throw std::invalid_argument("PiecewisePoly: one piece per subcell required");
    const std::size_t width = static_cast<std::size_t>(K) * basis_.alphas().size();
    for (std::size_t s = 0; s < pieces_.size(); ++s) {
        if (pieces_[s].coeffs.size() != width)
            throw std::invalid_argument("PiecewisePoly: piece " + std::to_string(s) + " has the wrong jet size");
        if (!partition_.subcell(s).contains(pieces_[s].center))
            throw std::invalid_argument("PiecewisePoly: piece " + std::to_string(s) + " is centred outside its subcell");
    }
}

void PiecewisePoly::jets(std::size_t s, std::span<const double> x, std::span<double> out) const {
    pieces_[s].jets(basis_, x, out);
}

void PiecewisePoly::values(std::size_t s, std::span<const double> x, std::span<double> out) const {
    pieces_[s].values(basis_, x, out);
}

bool apply_piece(const PdeSystem& sys, const PiecewisePoly& u, std::size_t s, std::span<const double> x,
                 std::span<double> out) {
    thread_local std::vector<double> xi;
    xi.resize(sys.M());
    u.jets(s, x, xi);
    return sys.try_eval(x, xi, out);
}

std::optional<std::vector<double>> apply_operator(const PdeSystem& sys, const PiecewisePoly& u,
                                                  std::span<const double> x) {
    if (sys.K() != u.K() || static_cast<std::size_t>(sys.n()) != u.partition().dim() || sys.m() > u.basis().m())
        throw std::invalid_argument("apply_operator: system and field do not match");
    auto s = u.partition().locate(x);
    if (!s) throw DomainError("apply_operator: point outside the domain");
    if (u.partition().on_skeleton(x)) return std::nullopt;
    std::vector<double> out(static_cast<std::size_t>(sys.K()));
    if (!apply_piece(sys, u, *s, x, out)) throw EvalUndefined("apply_operator: F undefined at the point");
    return out;
}

std::vector<GridFn> embed_piecewise(const PiecewisePoly& u, const Lattice& lattice, Exec exec) {
    return embed_field(
        u.partition(), lattice, static_cast<std::size_t>(u.K()),
        [&](std::size_t s, std::span<const double> x, std::span<double> out) { u.values(s, x, out); }, exec);
}

std::vector<GridFn> embed_image(const PdeSystem& sys, const PiecewisePoly& u, const Lattice& lattice, Exec exec) {
    return embed_field(
        u.partition(), lattice, static_cast<std::size_t>(sys.K()),
        [&](std::size_t s, std::span<const double> x, std::span<double> out) {
            if (!apply_piece(sys, u, s, x, out)) throw EvalUndefined("embed_image: F undefined at a lattice node");
        },
        exec);
}

} // namespace ocm
