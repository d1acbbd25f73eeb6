#pragma once

#include "ocm/baire.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocm::testing {

// Expressions over n = 2, K = 2, m = 2 covering every node kind and precedence level.
inline const std::vector<std::string> kCorpus = {
    "D(u1,(1,0))",
    "D(u1,(1,0))^2 + u1",
    "u1 + 2*x1",
    "-u1",
    "--x2",
    "-x1^2",
    "(-x1)^2",
    "x1 - x2 - u2",
    "x1 - (x2 - u2)",
    "x1 / x2 / 3",
    "1 + 2 * 3 - 4 / 5",
    "sin(u1) + cos(u2)",
    "exp(log(abs(x1) + 1))",
    "sqrt(D(u2,(0,2)) * D(u2,(0,2)))",
    "D(u1,(2,0)) + D(u1,(0,2)) - x1*x2",
    "(u1 + u2)^3 - u1^0",
    "2.5e-3 * D(u2,(1,1))",
    "0.1 + 1e10 - 3.25",
    "abs(-(x1 - 0.5))^2 / (1 + x2^2)",
    "exp(-(x1^2 + x2^2)) * sin(3.14159 * u1)",
};


inline Lattice line(std::size_t nodes, double a = -1.0, double b = 1.0) {
    return Lattice::uniform(Box::make({a}, {b}), {nodes});
}

inline std::vector<ExtReal> ext(const std::vector<double>& v) {
    std::vector<ExtReal> out;
    for (double d : v) out.emplace_back(d);
    return out;
}

// Literal evaluation of sup over open V containing x of inf_V f (or the dual).
//
// A set V of lattice nodes (plus the ghost points attached to its members) is
// open when every masked member y has its requirement set inside V: the ghost
// points of y when it carries any, else the stencil neighbours of strictly
// lower codimension. Unmasked nodes and ghost points impose nothing. Candidate
// sets are enumerated over the masked nodes of the Chebyshev ball of radius
// codim(x) around x; for each choice of masked members only the ordinary nodes
// they require are added, since adding more members can only lower an infimum.
inline ExtReal oracle(const GridFn& f, std::size_t x, bool lower) {
    const Lattice& L = f.lattice();
    const std::size_t radius = f.codim(x);
    auto ix = L.multi_index(x);
    std::vector<std::size_t> window;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto iy = L.multi_index(i);
        bool in = true;
        for (std::size_t d = 0; d < L.dim(); ++d) {
            const long diff = static_cast<long>(iy[d]) - static_cast<long>(ix[d]);
            if (static_cast<std::size_t>(std::abs(diff)) > radius) in = false;
        }
        if (in) window.push_back(i);
    }
    std::vector<std::size_t> masked;
    for (std::size_t i : window)
        if (f.masked(i) && i != x) masked.push_back(i);
    if (masked.size() >= 24) throw std::logic_error("oracle window too large");

    auto in_window = [&](std::size_t i) { return std::find(window.begin(), window.end(), i) != window.end(); };
    auto requires_of = [&](std::size_t y) {
        std::vector<std::size_t> req;
        if (!f.ghosts(y).empty()) return req;
        for (std::size_t z : L.stencil(y))
            if (f.codim(z) < f.codim(y)) req.push_back(z);
        return req;
    };

    const ExtReal worst = lower ? ExtReal::neg_inf() : ExtReal::pos_inf();
    ExtReal best = worst;
    bool any = false;
    for (std::uint32_t bits = 0; bits < (1u << masked.size()); ++bits) {
        std::vector<std::size_t> members{x};
        for (std::size_t k = 0; k < masked.size(); ++k)
            if (bits & (1u << k)) members.push_back(masked[k]);
        if (!f.masked(x)) members.resize(1);
        bool open = true;
        std::vector<std::size_t> closure = members;
        for (std::size_t y : members) {
            if (!f.masked(y)) continue;
            for (std::size_t z : requires_of(y)) {
                if (!in_window(z)) open = false;
                if (f.masked(z)) {
                    if (std::find(members.begin(), members.end(), z) == members.end()) open = false;
                } else {
                    closure.push_back(z);
                }
            }
        }
        if (!open) continue;
        ExtReal v = lower ? ExtReal::pos_inf() : ExtReal::neg_inf();
        for (std::size_t y : closure) {
            v = lower ? min(v, f[y]) : max(v, f[y]);
            for (ExtReal g : f.ghosts(y)) v = lower ? min(v, g) : max(v, g);
        }
        best = lower ? max(best, v) : min(best, v);
        any = true;
        if (!f.masked(x)) break;
    }
    if (!any) throw std::logic_error("no open neighbourhood found");
    return best;
}

inline GridFn oracle_apply(const GridFn& f, bool lower) {
    std::vector<ExtReal> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = oracle(f, i, lower);
    return f.with_values(std::move(v));
}

// Piecewise data: random polynomial pieces between random breakpoint lines,
// arbitrary values (some infinite) on the lines, optional ghosts.
inline GridFn random_piecewise(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    const std::size_t dim = coin(rng) ? 1 : 2;
    std::vector<std::size_t> nodes(dim);
    for (auto& k : nodes) k = dim == 1 ? std::uniform_int_distribution<std::size_t>(3, 400)(rng)
                                       : std::uniform_int_distribution<std::size_t>(3, 31)(rng);
    Point lo(dim, 0.0), hi(dim, 1.0);
    Lattice L = Lattice::uniform(Box::make(lo, hi), nodes);

    std::vector<std::vector<bool>> is_break(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        is_break[d].assign(nodes[d], false);
        std::uniform_int_distribution<std::size_t> pick(0, nodes[d] - 1);
        const std::size_t count = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        for (std::size_t k = 0; k < count; ++k) is_break[d][pick(rng)] = true;
    }
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<std::vector<double>> coef(64);
    for (auto& c : coef) c = {u(rng), u(rng), u(rng)};

    std::vector<ExtReal> values(L.size());
    std::vector<std::uint8_t> codim(L.size());
    std::vector<std::vector<ExtReal>> ghosts(L.size());
    bool use_ghosts = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
    for (std::size_t i = 0; i < L.size(); ++i) {
        auto idx = L.multi_index(i);
        Point x = L.point(i);
        std::size_t piece = 0;
        std::uint8_t c = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            std::size_t before = 0;
            for (std::size_t k = 0; k <= idx[d]; ++k) before += is_break[d][k];
            piece = piece * 8 + before;
            c += is_break[d][idx[d]];
        }
        const auto& a = coef[piece % coef.size()];
        double s = 0.0;
        for (double xd : x) s += xd;
        double v = a[0] + a[1] * s + a[2] * s * s;
        const int roll = std::uniform_int_distribution<int>(0, 99)(rng);
        if (c > 0) {
            v = u(rng) * 3;
            if (use_ghosts && roll < 50) ghosts[i] = {ExtReal(u(rng)), ExtReal(u(rng))};
        }
        codim[i] = c;
        if (roll == 0) values[i] = ExtReal::pos_inf();
        else if (roll == 1) values[i] = ExtReal::neg_inf();
        else values[i] = ExtReal(v);
    }
    GridFn f(L, values, codim);
    if (use_ghosts) f.set_ghosts(ghosts);
    return f;
}

} // namespace ocm::testing
