#include "ocm/filters.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ocm::filters {

namespace {

bool subset(Set a, Set b) { return (a & ~b) == 0; }

void check_ground(std::size_t ground) {
    if (ground == 0 || ground > 64) throw FilterError("ground set size must lie in [1, 64]");
}

// {(x, y) : (f(x), f(y)) in s}.
Set rel_preimage(Set s, const Map& f, std::size_t size, std::size_t target) {
    Set r = 0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if (s & singleton(pair_index(f[x], f[y], target))) r |= singleton(pair_index(x, y, size));
    return r;
}

Set preimage(Set s, const Map& f, std::size_t size) {
    Set r = 0;
    for (std::size_t x = 0; x < size; ++x)
        if (s & singleton(f[x])) r |= singleton(x);
    return r;
}

void check_maps(std::size_t size, const std::vector<Map>& maps, const std::vector<std::size_t>& targets) {
    if (maps.size() != targets.size()) throw FilterError("one structure per map required");
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].size() != size) throw FilterError("map " + std::to_string(i) + " is not defined on every point");
        for (std::size_t v : maps[i])
            if (v >= targets[i]) throw FilterError("map " + std::to_string(i) + " leaves its target set");
    }
}

// All intersections S_1 ∩ ... ∩ S_k with S_i drawn from choices[i], nonempty.
Generators intersect_choices(Set start, const std::vector<std::vector<Set>>& choices) {
    Generators acc{start};
    for (const auto& options : choices) {
        Generators next;
        for (Set a : acc)
            for (Set b : options)
                if (Set c = a & b) next.push_back(c);
        acc = canonical(std::move(next));
    }
    return canonical(std::move(acc));
}

std::string rel_to_string(Set r, std::size_t size) {
    std::string s = "{";
    bool first = true;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if (r & singleton(pair_index(x, y, size))) {
                if (!first) s += ",";
                first = false;
                s += "(" + std::to_string(x) + "," + std::to_string(y) + ")";
            }
    return s + "}";
}

void fail(Verdict& v, int axiom, std::string witness) {
    v.axioms[static_cast<std::size_t>(axiom)] = false;
    if (v.pass || axiom < v.violated) {
        v.violated = axiom;
        v.witness = std::move(witness);
    }
    v.pass = false;
}

} // namespace

std::string set_to_string(Set s, std::size_t size) {
    std::string out = "{";
    bool first = true;
    for (std::size_t x = 0; x < size; ++x)
        if (s & singleton(x)) {
            if (!first) out += ",";
            first = false;
            out += std::to_string(x);
        }
    return out + "}";
}

// ---------------------------------------------------------------------------
// FiniteFilter

FiniteFilter FiniteFilter::from_base(std::size_t ground, const std::vector<Set>& base) {
    check_ground(ground);
    if (base.empty()) throw FilterError("filter base is empty");
    Set gen = full_set(ground);
    for (Set a : base) {
        if (a == 0) throw FilterError("filter base contains the empty set");
        if (!subset(a, full_set(ground))) throw FilterError("filter base set leaves the ground set");
        gen &= a;
    }
    for (Set a : base)
        for (Set b : base)
            if (std::none_of(base.begin(), base.end(), [&](Set c) { return subset(c, a & b); }))
                throw FilterError("filter base is not directed: no base set inside " + set_to_string(a & b, ground));
    return FiniteFilter(ground, gen);
}

FiniteFilter FiniteFilter::principal(std::size_t ground, std::size_t x) {
    check_ground(ground);
    if (x >= ground) throw FilterError("point outside the ground set");
    return FiniteFilter(ground, singleton(x));
}

FiniteFilter FiniteFilter::generated(std::size_t ground, Set g) { return from_base(ground, {g}); }

std::vector<Set> FiniteFilter::members() const {
    const Set free = full_set(ground_) & ~gen_;
    if (std::popcount(free) > 20) throw FilterError("filter too large to enumerate");
    std::vector<Set> out;
    Set sub = 0;
    do {
        out.push_back(gen_ | sub);
        sub = (sub - free) & free;
    } while (sub != 0);
    std::sort(out.begin(), out.end());
    return out;
}

FiniteFilter image(const FiniteFilter& F, const std::vector<std::size_t>& map, std::size_t target) {
    check_ground(target);
    if (map.size() != F.ground()) throw FilterError("map is not defined on every point");
    Set g = 0;
    for (std::size_t x = 0; x < map.size(); ++x) {
        if (map[x] >= target) throw FilterError("map leaves its target set");
        if (F.generator() & singleton(x)) g |= singleton(map[x]);
    }
    return FiniteFilter::generated(target, g);
}

FiniteFilter product(const FiniteFilter& F, const FiniteFilter& G) {
    const std::size_t nx = F.ground(), ny = G.ground();
    if (nx * ny > 64) throw FilterError("product ground set too large");
    Set g = 0;
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
            if ((F.generator() & singleton(x)) && (G.generator() & singleton(y))) g |= singleton(x * ny + y);
    return FiniteFilter::generated(nx * ny, g);
}

FiniteFilter intersection(const FiniteFilter& F, const FiniteFilter& G) {
    if (F.ground() != G.ground()) throw FilterError("filters on different ground sets");
    return FiniteFilter::generated(F.ground(), F.generator() | G.generator());
}

bool finer(const FiniteFilter& F, const FiniteFilter& G) {
    if (F.ground() != G.ground()) throw FilterError("filters on different ground sets");
    return subset(F.generator(), G.generator());
}

// ---------------------------------------------------------------------------
// Relations

std::size_t pair_index(std::size_t x, std::size_t y, std::size_t size) { return x * size + y; }

Set rel_inverse(Set r, std::size_t size) {
    Set out = 0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if (r & singleton(pair_index(x, y, size))) out |= singleton(pair_index(y, x, size));
    return out;
}

Set rel_compose(Set r, Set s, std::size_t size) {
    Set out = 0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t z = 0; z < size; ++z) {
            if (!(s & singleton(pair_index(x, z, size)))) continue;
            for (std::size_t y = 0; y < size; ++y)
                if (r & singleton(pair_index(z, y, size))) out |= singleton(pair_index(x, y, size));
        }
    return out;
}

Set rel_apply(Set r, Set a, std::size_t size) {
    Set out = 0;
    for (std::size_t x = 0; x < size; ++x) {
        if (!(a & singleton(x))) continue;
        for (std::size_t y = 0; y < size; ++y)
            if (r & singleton(pair_index(x, y, size))) out |= singleton(y);
    }
    return out;
}

Set rel_image(Set r, const std::vector<std::size_t>& map, std::size_t size, std::size_t target) {
    Set out = 0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if (r & singleton(pair_index(x, y, size))) out |= singleton(pair_index(map[x], map[y], target));
    return out;
}

Set rel_product(Set a, Set b, std::size_t size) {
    Set out = 0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if ((a & singleton(x)) && (b & singleton(y))) out |= singleton(pair_index(x, y, size));
    return out;
}

Set rel_diagonal(std::size_t size) {
    Set out = 0;
    for (std::size_t x = 0; x < size; ++x) out |= singleton(pair_index(x, x, size));
    return out;
}

std::size_t relation_side(const FiniteFilter& U) {
    std::size_t side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(U.ground()))));
    if (side * side != U.ground()) throw FilterError("not a filter on a square X x X");
    return side;
}

FiniteFilter inverse(const FiniteFilter& U) {
    const std::size_t n = relation_side(U);
    return FiniteFilter::generated(U.ground(), rel_inverse(U.generator(), n));
}

FiniteFilter compose(const FiniteFilter& U, const FiniteFilter& V) {
    if (U.ground() != V.ground()) throw FilterError("relations on different ground sets");
    const std::size_t n = relation_side(U);
    Set c = rel_compose(U.generator(), V.generator(), n);
    if (c == 0) throw UndefinedComposition("U∘V is undefined: the generators do not compose");
    return FiniteFilter::generated(U.ground(), c);
}

FiniteFilter apply(const FiniteFilter& U, const FiniteFilter& F) {
    const std::size_t n = relation_side(U);
    if (F.ground() != n) throw FilterError("filter and relation live on different ground sets");
    Set a = rel_apply(U.generator(), F.generator(), n);
    if (a == 0) throw UndefinedComposition("U[F] is undefined: no pair leaves " + set_to_string(F.generator(), n));
    return FiniteFilter::generated(n, a);
}

FiniteFilter apply(const FiniteFilter& U, std::size_t x) {
    return apply(U, FiniteFilter::principal(relation_side(U), x));
}

// ---------------------------------------------------------------------------
// Structure tables

Generators canonical(Generators g) {
    g.erase(std::remove(g.begin(), g.end(), Set{0}), g.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    Generators out;
    for (Set a : g)
        if (std::none_of(g.begin(), g.end(), [&](Set b) { return b != a && subset(a, b); })) out.push_back(a);
    return out;
}

bool covered(const Generators& g, Set s) {
    return std::any_of(g.begin(), g.end(), [&](Set b) { return subset(s, b); });
}

ConvergenceTable make_convergence(std::size_t size, std::vector<Generators> lambda) {
    if (size == 0 || size > kMaxGround) throw FilterError("convergence ground set must have 1 to 6 points");
    if (lambda.size() != size) throw FilterError("one family per point required");
    for (auto& g : lambda) {
        for (Set a : g)
            if (!subset(a, full_set(size))) throw FilterError("generator leaves the ground set");
        g = canonical(std::move(g));
    }
    return {size, std::move(lambda)};
}

UniformTable make_uniform(std::size_t size, Generators J) {
    if (size == 0 || size > kMaxRelationGround) throw FilterError("relation ground set must have 1 to 4 points");
    for (Set a : J)
        if (!subset(a, full_set(size * size))) throw FilterError("generator leaves X x X");
    return {size, canonical(std::move(J))};
}

Verdict check_convergence_structure(const ConvergenceTable& t) {
    Verdict v;
    for (std::size_t x = 0; x < t.size; ++x) {
        const auto& L = t.lambda[x];
        if (!covered(L, singleton(x))) fail(v, 1, "[" + std::to_string(x) + "] does not converge to " + std::to_string(x));
        for (Set a : L)
            for (Set b : L)
                if (!covered(L, a | b))
                    fail(v, 2, "at " + std::to_string(x) + ": [" + set_to_string(a, t.size) + "] ∩ [" +
                                   set_to_string(b, t.size) + "] missing");
    }
    v.hausdorff = true;
    for (std::size_t x = 0; x < t.size; ++x)
        for (std::size_t y = x + 1; y < t.size; ++y)
            for (Set a : t.lambda[x])
                for (Set b : t.lambda[y])
                    if (a & b) v.hausdorff = false;
    return v;
}

Verdict check_ucs(const UniformTable& t, int skip) {
    Verdict v;
    const std::size_t n = t.size;
    const auto& J = t.J;
    if (skip != 1)
        for (std::size_t x = 0; x < n; ++x)
            if (!covered(J, singleton(pair_index(x, x, n))))
                fail(v, 1, "[" + std::to_string(x) + "]x[" + std::to_string(x) + "] not in J");
    if (skip != 2)
        for (Set a : J)
            for (Set b : J)
                if (!covered(J, a | b))
                    fail(v, 2, "[" + rel_to_string(a, n) + "] ∩ [" + rel_to_string(b, n) + "] not in J");
    if (skip != 4)
        for (Set a : J)
            if (!covered(J, rel_inverse(a, n))) fail(v, 4, "inverse of [" + rel_to_string(a, n) + "] not in J");
    if (skip != 5)
        for (Set a : J)
            for (Set b : J) {
                Set c = rel_compose(a, b, n);
                if (c != 0 && !covered(J, c))
                    fail(v, 5, "[" + rel_to_string(a, n) + "]∘[" + rel_to_string(b, n) + "] not in J");
            }
    return v;
}

ConvergenceTable induced_convergence(const UniformTable& t) {
    ConvergenceTable out{t.size, std::vector<Generators>(t.size)};
    for (std::size_t x = 0; x < t.size; ++x) {
        Generators rows;
        for (Set r : t.J) rows.push_back(rel_apply(r, singleton(x), t.size));
        out.lambda[x] = canonical(std::move(rows));
    }
    return out;
}

UniformTable initial_ucs(std::size_t size, const std::vector<Map>& maps, const std::vector<UniformTable>& structures) {
    if (size == 0 || size > kMaxRelationGround) throw FilterError("relation ground set must have 1 to 4 points");
    std::vector<std::size_t> targets;
    for (const auto& s : structures) targets.push_back(s.size);
    check_maps(size, maps, targets);
    std::vector<std::vector<Set>> choices;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        std::vector<Set> pre;
        for (Set s : structures[i].J) pre.push_back(rel_preimage(s, maps[i], size, structures[i].size));
        choices.push_back(std::move(pre));
    }
    return {size, intersect_choices(full_set(size * size), choices)};
}

ConvergenceTable initial_convergence(std::size_t size, const std::vector<Map>& maps,
                                     const std::vector<ConvergenceTable>& structures) {
    if (size == 0 || size > kMaxGround) throw FilterError("convergence ground set must have 1 to 6 points");
    std::vector<std::size_t> targets;
    for (const auto& s : structures) targets.push_back(s.size);
    check_maps(size, maps, targets);
    ConvergenceTable out{size, std::vector<Generators>(size)};
    for (std::size_t x = 0; x < size; ++x) {
        std::vector<std::vector<Set>> choices;
        for (std::size_t i = 0; i < maps.size(); ++i) {
            std::vector<Set> pre;
            for (Set s : structures[i].lambda[maps[i][x]]) pre.push_back(preimage(s, maps[i], size));
            choices.push_back(std::move(pre));
        }
        out.lambda[x] = intersect_choices(full_set(size), choices);
    }
    return out;
}

bool check_initial_compat(std::size_t size, const std::vector<Map>& maps, const std::vector<UniformTable>& structures) {
    std::vector<ConvergenceTable> induced;
    for (const auto& s : structures) induced.push_back(induced_convergence(s));
    return induced_convergence(initial_ucs(size, maps, structures)) == initial_convergence(size, maps, induced);
}

bool is_cauchy(const FiniteFilter& F, const UniformTable& t) {
    if (F.ground() != t.size) throw FilterError("filter and structure live on different ground sets");
    return covered(t.J, rel_product(F.generator(), F.generator(), t.size));
}

ContinuityVerdict check_uniform_continuity(const Map& f, const UniformTable& tX, const UniformTable& tY) {
    check_maps(tX.size, {f}, {tY.size});
    for (Set r : tX.J) {
        Set img = rel_image(r, f, tX.size, tY.size);
        if (!covered(tY.J, img)) return {false, r};
    }
    return {true, std::nullopt};
}

} // namespace ocm::filters
