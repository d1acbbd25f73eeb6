#include "ocm/baire.hpp"

#include "ocm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ocm {

namespace {

// One operator sweep. Nodes are processed in increasing codimension; a node of
// codimension c reads only finished results of codimension < c (or its own
// ghosts), so every level is an independent data-parallel loop.
GridFn envelope_sweep(const GridFn& f, bool lower, Exec exec) {
    const Lattice& L = f.lattice();
    std::vector<ExtReal> out = f.values();
    std::vector<std::vector<std::size_t>> levels(L.dim() + 1);
    for (std::size_t i = 0; i < f.size(); ++i) levels[f.codim(i)].push_back(i);

    for (std::size_t level = 1; level < levels.size(); ++level) {
        const auto& nodes = levels[level];
        for_each_index(nodes.size(), exec, [&](std::size_t k) {
            const std::size_t i = nodes[k];
            ExtReal v = f[i];
            auto g = f.ghosts(i);
            if (!g.empty()) {
                for (ExtReal gv : g) v = lower ? min(v, gv) : max(v, gv);
            } else {
                for (std::size_t y : L.stencil(i))
                    if (f.codim(y) < level) v = lower ? min(v, out[y]) : max(v, out[y]);
            }
            out[i] = v;
        });
    }
    return f.with_values(std::move(out));
}

void collect_neighbourhood(const GridFn& f, std::size_t node, std::set<std::size_t>& acc) {
    if (!acc.insert(node).second) return;
    if (f.codim(node) == 0 || !f.ghosts(node).empty()) return;
    for (std::size_t y : f.lattice().stencil(node))
        if (f.codim(y) < f.codim(node)) collect_neighbourhood(f, y, acc);
}

} // namespace

GridFn lower_baire(const GridFn& f, Exec exec) { return envelope_sweep(f, true, exec); }

GridFn upper_baire(const GridFn& f, Exec exec) { return envelope_sweep(f, false, exec); }

GridFn normalize_nls(const GridFn& f, Exec exec) { return lower_baire(upper_baire(f, exec), exec); }

GridFn normalize_nus(const GridFn& f, Exec exec) { return upper_baire(lower_baire(f, exec), exec); }

SemicontinuityFlags semicontinuity_classify(const GridFn& f) {
    SemicontinuityFlags flags;
    flags.lsc = lower_baire(f) == f;
    flags.usc = upper_baire(f) == f;
    flags.nlsc = normalize_nls(f) == f;
    flags.nusc = normalize_nus(f) == f;
    return flags;
}

std::vector<std::size_t> minimal_neighbourhood(const GridFn& f, std::size_t node) {
    std::set<std::size_t> acc;
    collect_neighbourhood(f, node, acc);
    return {acc.begin(), acc.end()};
}

bool EnvelopePair::valid(double slack) const {
    if (!(lower.lattice() == upper.lattice())) return false;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i].value() > upper[i].value() + slack) return false;
        if (!lower.masked(i) && !(lower[i].is_finite() && upper[i].is_finite())) return false;
    }
    return true;
}

std::vector<GridFn> embed_field(const CellPartition& p, const Lattice& lattice, std::size_t K,
                                const PieceEvaluator& eval, Exec exec) {
    if (lattice.dim() != p.dim()) throw DomainError("embed: lattice and partition dimensions differ");
    const std::size_t N = lattice.size();
    std::vector<std::vector<ExtReal>> values(K, std::vector<ExtReal>(N));
    std::vector<std::vector<std::vector<ExtReal>>> ghosts(K, std::vector<std::vector<ExtReal>>(N));
    std::vector<std::uint8_t> codim(N, 0);

    for_each_index(N, exec, [&](std::size_t i) {
        Point x = lattice.point(i);
        if (!p.bounds().contains(x)) throw DomainError("embed: lattice node outside the partition's bounding box");
        std::vector<double> out(K);
        std::size_t c = p.skeleton_codim(x);
        codim[i] = static_cast<std::uint8_t>(c);
        if (c == 0) {
            eval(*p.locate(x), x, out);
            for (std::size_t k = 0; k < K; ++k) values[k][i] = ExtReal(out[k]);
            return;
        }
        for (std::size_t k = 0; k < K; ++k) values[k][i] = ExtReal(0.0);
        for (std::size_t s : p.subcells_touching(x)) {
            eval(s, x, out);
            for (std::size_t k = 0; k < K; ++k) ghosts[k][i].emplace_back(out[k]);
        }
    });

    std::vector<GridFn> result;
    result.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        GridFn w(lattice, std::move(values[k]), codim);
        w.set_ghosts(ghosts[k]);
        result.push_back(normalize_nls(w, exec));
    }
    return result;
}

} // namespace ocm
