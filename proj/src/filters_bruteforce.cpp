#include "ocm/filters_bruteforce.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>

namespace ocm::filters::brute {

namespace {

std::size_t subsets(std::size_t universe) { return std::size_t{1} << universe; }

void check_universe(std::size_t universe) {
    if (universe == 0 || universe > kMaxUniverse) throw FilterError("brute force: universe must have 1 to 4 elements");
}

bool has(Family f, Set a) { return (f >> a) & 1U; }

bool in(const std::vector<Family>& fs, Family f) { return std::find(fs.begin(), fs.end(), f) != fs.end(); }

// Filter generated by the image of every member under op; 0 when some image is empty.
template <class Op>
Family lift(Family f, std::size_t universe, std::size_t target, Op&& op) {
    std::vector<Set> images;
    for (Set a : members(f, universe)) {
        Set b = op(a);
        if (b == 0) return 0;
        images.push_back(b);
    }
    return upward(images, target);
}

Family product(Family f, Family g, std::size_t n) {
    std::vector<Set> sets;
    for (Set a : members(f, n))
        for (Set b : members(g, n)) sets.push_back(rel_product(a, b, n));
    return upward(sets, n * n);
}

Family principal(std::size_t x, std::size_t universe) { return upward({singleton(x)}, universe); }

void fail(Verdict& v, int axiom) {
    v.axioms[static_cast<std::size_t>(axiom)] = false;
    if (v.pass || axiom < v.violated) v.violated = axiom;
    v.pass = false;
}

} // namespace

bool is_filter(Family f, std::size_t universe) {
    const std::size_t N = subsets(universe);
    if (f == 0 || has(f, 0)) return false;
    for (Set a = 0; a < N; ++a) {
        if (!has(f, a)) continue;
        for (Set b = 0; b < N; ++b) {
            if ((a & b) == a && !has(f, b)) return false;  // supersets
            if (has(f, b) && !has(f, a & b)) return false;  // intersections
        }
    }
    return true;
}

const std::vector<Family>& all_filters(std::size_t universe) {
    check_universe(universe);
    static std::array<std::vector<Family>, kMaxUniverse + 1> cache;
    static std::once_flag once[kMaxUniverse + 1];
    std::call_once(once[universe], [&] {
        const std::size_t N = subsets(universe);
        const Family last = N == 64 ? ~Family{0} : (Family{1} << N) - 1;
        for (Family f = 1;; ++f) {
            if (is_filter(f, universe)) cache[universe].push_back(f);
            if (f == last) break;
        }
    });
    return cache[universe];
}

Family upward(const std::vector<Set>& sets, std::size_t universe) {
    Family f = 0;
    for (Set a = 0; a < subsets(universe); ++a)
        for (Set s : sets)
            if ((s & a) == s) {
                f |= Family{1} << a;
                break;
            }
    return f;
}

std::vector<Set> members(Family f, std::size_t universe) {
    std::vector<Set> out;
    for (Set a = 0; a < subsets(universe); ++a)
        if (has(f, a)) out.push_back(a);
    return out;
}

std::vector<std::vector<Family>> expand(const ConvergenceTable& t) {
    check_universe(t.size);
    std::vector<std::vector<Family>> out(t.size);
    for (std::size_t x = 0; x < t.size; ++x) {
        std::vector<Family> listed;
        for (Set g : t.lambda[x]) listed.push_back(upward({g}, t.size));
        for (Family F : all_filters(t.size))
            if (std::any_of(listed.begin(), listed.end(), [&](Family G) { return (F & G) == G; }))
                out[x].push_back(F);
    }
    return out;
}

std::vector<Family> expand(const UniformTable& t) {
    const std::size_t u = t.size * t.size;
    check_universe(u);
    std::vector<Family> listed, out;
    for (Set g : t.J) listed.push_back(upward({g}, u));
    for (Family F : all_filters(u))
        if (std::any_of(listed.begin(), listed.end(), [&](Family G) { return (F & G) == G; })) out.push_back(F);
    return out;
}

Verdict check_convergence_structure(const ConvergenceTable& t) {
    Verdict v;
    v.upward_closure_by_construction = false;
    const auto lambda = expand(t);
    const auto& filters = all_filters(t.size);
    for (std::size_t x = 0; x < t.size; ++x) {
        const auto& L = lambda[x];
        if (!in(L, principal(x, t.size))) fail(v, 1);
        for (Family F : L)
            for (Family G : L)
                if (!in(L, F & G)) fail(v, 2);
        for (Family F : L)
            for (Family H : filters)
                if ((H & F) == F && !in(L, H)) fail(v, 3);
    }
    v.hausdorff = true;
    for (std::size_t x = 0; x < t.size; ++x)
        for (std::size_t y = x + 1; y < t.size; ++y)
            for (Family F : lambda[x])
                if (in(lambda[y], F)) v.hausdorff = false;
    return v;
}

Verdict check_ucs(const UniformTable& t) {
    Verdict v;
    v.upward_closure_by_construction = false;
    const std::size_t n = t.size, u = n * n;
    const auto J = expand(t);
    for (std::size_t x = 0; x < n; ++x)
        if (!in(J, product(principal(x, n), principal(x, n), n))) fail(v, 1);
    for (Family U : J)
        for (Family V : J)
            if (!in(J, U & V)) fail(v, 2);
    for (Family U : J)
        for (Family H : all_filters(u))
            if ((H & U) == U && !in(J, H)) fail(v, 3);
    for (Family U : J)
        if (!in(J, lift(U, u, u, [&](Set a) { return rel_inverse(a, n); }))) fail(v, 4);
    for (Family U : J)
        for (Family V : J) {
            std::vector<Set> comps;
            bool defined = true;
            for (Set a : members(U, u))
                for (Set b : members(V, u)) {
                    Set c = rel_compose(a, b, n);
                    if (c == 0) defined = false;
                    comps.push_back(c);
                }
            if (defined && !in(J, upward(comps, u))) fail(v, 5);
        }
    return v;
}

std::vector<std::vector<Family>> induced_convergence(const UniformTable& t) {
    const auto J = expand(t);
    std::vector<std::vector<Family>> out(t.size);
    for (std::size_t x = 0; x < t.size; ++x)
        for (Family F : all_filters(t.size))
            if (in(J, product(principal(x, t.size), F, t.size))) out[x].push_back(F);
    return out;
}

std::vector<Family> initial_ucs(std::size_t size, const std::vector<Map>& maps, const std::vector<UniformTable>& structures) {
    std::vector<std::vector<Family>> Js;
    for (const auto& s : structures) Js.push_back(expand(s));
    std::vector<Family> out;
    const std::size_t u = size * size;
    for (Family U : all_filters(u)) {
        bool ok = true;
        for (std::size_t i = 0; i < maps.size() && ok; ++i) {
            const std::size_t m = structures[i].size;
            Family img = lift(U, u, m * m, [&](Set a) { return rel_image(a, maps[i], size, m); });
            ok = in(Js[i], img);
        }
        if (ok) out.push_back(U);
    }
    return out;
}

std::vector<std::vector<Family>> initial_convergence(std::size_t size, const std::vector<Map>& maps,
                                                     const std::vector<ConvergenceTable>& structures) {
    std::vector<std::vector<std::vector<Family>>> Ls;
    for (const auto& s : structures) Ls.push_back(expand(s));
    std::vector<std::vector<Family>> out(size);
    for (std::size_t x = 0; x < size; ++x)
        for (Family F : all_filters(size)) {
            bool ok = true;
            for (std::size_t i = 0; i < maps.size() && ok; ++i) {
                Family img = lift(F, size, structures[i].size, [&](Set a) {
                    Set b = 0;
                    for (std::size_t y = 0; y < size; ++y)
                        if (a & singleton(y)) b |= singleton(maps[i][y]);
                    return b;
                });
                ok = in(Ls[i][maps[i][x]], img);
            }
            if (ok) out[x].push_back(F);
        }
    return out;
}

bool is_cauchy(const FiniteFilter& F, const UniformTable& t) {
    Family f = upward({F.generator()}, t.size);
    return in(expand(t), product(f, f, t.size));
}

bool uniformly_continuous(const Map& f, const UniformTable& tX, const UniformTable& tY) {
    const auto JY = expand(tY);
    const std::size_t u = tX.size * tX.size, w = tY.size * tY.size;
    for (Family U : expand(tX)) {
        Family img = lift(U, u, w, [&](Set a) { return rel_image(a, f, tX.size, tY.size); });
        if (!in(JY, img)) return false;
    }
    return true;
}

} // namespace ocm::filters::brute
