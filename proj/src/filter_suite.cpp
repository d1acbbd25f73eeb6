#include "ocm/filter_suite.hpp"

#include "ocm/filters.hpp"
#include "ocm/filters_bruteforce.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>

namespace ocm::filters {

namespace {

std::string gens_to_string(const Generators& g, std::size_t size) {
    std::string s = "[";
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += " ";
        s += set_to_string(g[i], size);
    }
    return s + "]";
}

std::string table_name(const ConvergenceTable& t) {
    std::string s = "X=" + std::to_string(t.size);
    for (std::size_t x = 0; x < t.size; ++x) s += " l(" + std::to_string(x) + ")=" + gens_to_string(t.lambda[x], t.size);
    return s;
}

std::string table_name(const UniformTable& t) {
    return "X=" + std::to_string(t.size) + " J=" + gens_to_string(t.J, t.size * t.size);
}

// Convergence tables: every choice of an antichain per point.
std::vector<ConvergenceTable> all_convergence_tables(std::size_t size) {
    const auto chains = antichains(size);
    std::vector<ConvergenceTable> out;
    std::vector<std::size_t> idx(size, 0);
    for (;;) {
        std::vector<Generators> lambda;
        for (std::size_t x = 0; x < size; ++x) lambda.push_back(chains[idx[x]]);
        out.push_back(make_convergence(size, std::move(lambda)));
        std::size_t d = 0;
        while (d < size && ++idx[d] == chains.size()) idx[d++] = 0;
        if (d == size) return out;
    }
}

std::vector<UniformTable> all_uniform_tables(std::size_t size) {
    std::vector<UniformTable> out;
    for (auto& a : antichains(size * size)) out.push_back(make_uniform(size, a));
    return out;
}

// Equivalence relation from a random partition of {0..size-1}.
UniformTable random_equivalence(std::size_t size, std::mt19937_64& rng) {
    std::vector<std::size_t> block(size);
    for (std::size_t x = 0; x < size; ++x) block[x] = std::uniform_int_distribution<std::size_t>(0, x)(rng);
    Set r = 0;
    for (std::size_t x = 0; x < size; ++x)
        for (std::size_t y = 0; y < size; ++y)
            if (block[x] == block[y]) r |= singleton(pair_index(x, y, size));
    return make_uniform(size, {r});
}

template <class T>
bool same_families(const std::vector<T>& a, const std::vector<T>& b) {
    auto x = a, y = b;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

} // namespace

std::vector<std::vector<std::uint64_t>> antichains(std::size_t universe) {
    if (universe == 0 || universe > brute::kMaxUniverse) throw FilterError("antichains: universe must have 1 to 4 elements");
    const std::size_t nonempty = (std::size_t{1} << universe) - 1;
    std::vector<std::vector<std::uint64_t>> out;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << nonempty); ++pick) {
        std::vector<std::uint64_t> sets;
        for (std::size_t k = 0; k < nonempty; ++k)
            if (pick & (std::uint64_t{1} << k)) sets.push_back(k + 1);
        bool anti = true;
        for (auto a : sets)
            for (auto b : sets)
                if (a != b && (a & b) == a) anti = false;
        if (anti) out.push_back(std::move(sets));
    }
    return out;
}

bool SuiteResult::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass(); });
}

std::vector<SuiteSummary> SuiteResult::summary() const {
    std::vector<SuiteSummary> out;
    std::map<std::pair<std::string, int>, std::size_t> where;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.check, r.axiom);
        auto it = where.find(key);
        if (it == where.end()) {
            it = where.emplace(key, out.size()).first;
            out.push_back({r.check, r.axiom, 0, 0});
        }
        ++out[it->second].instances;
        if (!r.pass()) ++out[it->second].failures;
    }
    return out;
}

SuiteResult run_filter_suite(const SuiteOptions& opts) {
    SuiteResult res;
    if (opts.no_instances) {
        res.insufficient = true;
        return res;
    }
    auto add = [&](std::string check, std::string inst, int axiom, bool expected, bool got) {
        res.rows.push_back({std::move(check), std::move(inst), axiom, expected, got});
    };

    // Convergence structures, exhaustive for |X| <= 3.
    for (std::size_t size = 1; size <= 3; ++size)
        for (const auto& t : all_convergence_tables(size)) {
            Verdict fast = check_convergence_structure(t);
            Verdict slow = brute::check_convergence_structure(t);
            std::string name = table_name(t);
            for (int a = 1; a <= 3; ++a) add("convergence", name, a, slow.axioms[a], fast.axioms[a]);
            add("convergence.hausdorff", name, 0, slow.hausdorff, fast.hausdorff);
        }

    // Uniform convergence structures, exhaustive for |X| <= 2.
    std::vector<UniformTable> passing;
    for (std::size_t size = 1; size <= 2; ++size)
        for (const auto& t : all_uniform_tables(size)) {
            Verdict fast = check_ucs(t, opts.drop_axiom);
            Verdict slow = brute::check_ucs(t);
            std::string name = table_name(t);
            for (int a = 1; a <= 5; ++a) add("ucs", name, a, slow.axioms[a], fast.axioms[a]);
            if (!slow.pass) continue;
            passing.push_back(t);
            ConvergenceTable ind = induced_convergence(t);
            add("induced", name, 0, true,
                brute::expand(ind) == brute::induced_convergence(t) && check_convergence_structure(ind).pass);
            for (Set g = 1; g < (Set{1} << size); ++g) {
                FiniteFilter F = FiniteFilter::generated(size, g);
                add("cauchy", name + " F=" + set_to_string(g, size), 0, brute::is_cauchy(F, t), is_cauchy(F, t));
            }
        }
    for (const auto& tx : passing)
        for (const auto& ty : passing) {
            std::size_t maps = 1;
            for (std::size_t k = 0; k < tx.size; ++k) maps *= ty.size;
            for (std::size_t code = 0; code < maps; ++code) {
                Map f(tx.size);
                std::size_t c = code;
                for (auto& v : f) {
                    v = c % ty.size;
                    c /= ty.size;
                }
                std::string name = table_name(tx) + " -> " + table_name(ty);
                add("uniform_continuity", name, 0, brute::uniformly_continuous(f, tx, ty),
                    check_uniform_continuity(f, tx, ty).pass);
            }
        }

    // Relation algebra laws: all triples on |X| <= 2, random triples on |X| = 3.
    std::mt19937_64 rng(opts.seed);
    auto law_rows = [&](std::size_t size, Set u, Set v, Set w) {
        const std::size_t g = size * size;
        FiniteFilter U = FiniteFilter::generated(g, u), V = FiniteFilter::generated(g, v), W = FiniteFilter::generated(g, w);
        std::string name = "X=" + std::to_string(size) + " U=" + set_to_string(u, g) + " V=" + set_to_string(v, g) +
                           " W=" + set_to_string(w, g);
        if (rel_compose(u, v, size) != 0)
            add("law.inverse", name, 0, true, inverse(compose(U, V)) == compose(inverse(V), inverse(U)));
        bool left = rel_compose(u, v, size) != 0 && rel_compose(rel_compose(u, v, size), w, size) != 0;
        bool right = rel_compose(v, w, size) != 0 && rel_compose(u, rel_compose(v, w, size), size) != 0;
        if (left != right) {
            add("law.associativity", name, 0, true, false);
        } else if (left) {
            add("law.associativity", name, 0, true, compose(compose(U, V), W) == compose(U, compose(V, W)));
        }
    };
    for (std::size_t size = 1; size <= 2; ++size) {
        const Set top = Set{1} << (size * size);
        for (Set u = 1; u < top; ++u)
            for (Set v = 1; v < top; ++v)
                for (Set w = 1; w < top; ++w) law_rows(size, u, v, w);
    }
    {
        std::uniform_int_distribution<Set> rel(1, (Set{1} << 9) - 1);
        for (std::size_t k = 0; k < opts.random_triples; ++k) {
            Set u = rel(rng), v = rel(rng), w = rel(rng);
            law_rows(3, u, v, w);
        }
    }

    // Initial structures: random maps into random uniform structures.
    std::uniform_int_distribution<std::size_t> small(1, 3), factors(1, 2);
    for (std::size_t k = 0; k < opts.random_initial; ++k) {
        const std::size_t size = small(rng);
        const std::size_t count = factors(rng);
        std::vector<Map> maps;
        std::vector<UniformTable> Js;
        std::string name = "X=" + std::to_string(size);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t target = small(rng);
            Map f(size);
            for (auto& v : f) v = std::uniform_int_distribution<std::size_t>(0, target - 1)(rng);
            Js.push_back(random_equivalence(target, rng));
            name += " f" + std::to_string(i) + "=[";
            for (std::size_t x = 0; x < size; ++x) name += (x ? "," : "") + std::to_string(f[x]);
            name += "] " + table_name(Js.back());
            maps.push_back(std::move(f));
        }
        add("initial_compat", name, 0, true, check_initial_compat(size, maps, Js));
        std::vector<ConvergenceTable> induced;
        for (const auto& J : Js) induced.push_back(induced_convergence(J));
        add("initial_convergence", name, 0, true,
            brute::expand(initial_convergence(size, maps, induced)) == brute::initial_convergence(size, maps, induced));
        bool small_enough = size <= 2 && std::all_of(Js.begin(), Js.end(), [](const UniformTable& J) { return J.size <= 2; });
        if (small_enough) {
            UniformTable init = initial_ucs(size, maps, Js);
            add("initial_ucs", name, 0, true,
                same_families(brute::expand(init), brute::initial_ucs(size, maps, Js)) && check_ucs(init).pass);
        }
    }
    return res;
}

void write_suite_csv(std::ostream& os, const SuiteResult& r) {
    os << "check,instance,axiom,expected,got,pass\n";
    for (const auto& row : r.rows)
        os << row.check << ",\"" << row.instance << "\"," << row.axiom << ',' << (row.expected ? "true" : "false") << ','
           << (row.got ? "true" : "false") << ',' << (row.pass() ? "pass" : "fail") << '\n';
}

} // namespace ocm::filters
