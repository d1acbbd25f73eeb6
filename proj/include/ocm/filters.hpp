#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocm::filters {

/// Ground sets of convergence tables are capped at 6 points, relation ground
/// sets (uniform structures) at 4, so that exhaustive checks stay enumerable.
inline constexpr std::size_t kMaxGround = 6;
inline constexpr std::size_t kMaxRelationGround = 4;

/// Subset of a ground set {0, ..., size-1} as a bitmask.
using Set = std::uint64_t;

/// Invalid filter input (empty base, empty set in a base, undirected base, ...).
class FilterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// U∘V or U[F] would contain the empty set.
class UndefinedComposition : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline Set singleton(std::size_t x) { return Set{1} << x; }
inline Set full_set(std::size_t size) { return size >= 64 ? ~Set{0} : (Set{1} << size) - 1; }
std::string set_to_string(Set s, std::size_t size);

/// Filter on a finite ground set. On a finite set every filter is the
/// upward closure of one nonempty set, its generator (the intersection of all
/// members); the canonical base is {generator}.
class FiniteFilter {
public:
    /// Throws FilterError unless the base is nonempty, avoids the empty set,
    /// lies in the ground set and is directed.
    static FiniteFilter from_base(std::size_t ground, const std::vector<Set>& base);
    static FiniteFilter principal(std::size_t ground, std::size_t x);
    /// Filter generated by one nonempty set.
    static FiniteFilter generated(std::size_t ground, Set g);

    std::size_t ground() const { return ground_; }
    Set generator() const { return gen_; }
    std::vector<Set> base() const { return {gen_}; }
    bool contains(Set a) const { return (a & gen_) == gen_; }
    /// Every member, ascending.
    std::vector<Set> members() const;

    friend bool operator==(const FiniteFilter&, const FiniteFilter&) = default;

private:
    FiniteFilter(std::size_t ground, Set gen) : ground_(ground), gen_(gen) {}
    std::size_t ground_;
    Set gen_;
};

/// Image filter f(F); map[x] is the image of x in {0, ..., target-1}.
FiniteFilter image(const FiniteFilter& F, const std::vector<std::size_t>& map, std::size_t target);
/// F x G on X x Y, pair (x, y) at index x * |Y| + y.
FiniteFilter product(const FiniteFilter& F, const FiniteFilter& G);
/// F ∩ G (sets belonging to both).
FiniteFilter intersection(const FiniteFilter& F, const FiniteFilter& G);
/// F ⊇ G as families (F is finer than G).
bool finer(const FiniteFilter& F, const FiniteFilter& G);

// ---------------------------------------------------------------------------
// Relations on X (subsets of X x X, pair (x, y) at bit x * |X| + y)

std::size_t pair_index(std::size_t x, std::size_t y, std::size_t size);
Set rel_inverse(Set r, std::size_t size);
/// r∘s = {(x, y) : exists z, (x, z) in s and (z, y) in r}.
Set rel_compose(Set r, Set s, std::size_t size);
/// r[a] = {y : exists x in a, (x, y) in r}.
Set rel_apply(Set r, Set a, std::size_t size);
/// (f x f)(r) for f : X -> Y.
Set rel_image(Set r, const std::vector<std::size_t>& map, std::size_t size, std::size_t target);
/// a x b as a relation on one set.
Set rel_product(Set a, Set b, std::size_t size);
/// {(x, x)}.
Set rel_diagonal(std::size_t size);

/// Ground size of X for a filter on X x X; throws FilterError if not a square.
std::size_t relation_side(const FiniteFilter& U);
FiniteFilter inverse(const FiniteFilter& U);
/// Throws UndefinedComposition when U∘V contains the empty set.
FiniteFilter compose(const FiniteFilter& U, const FiniteFilter& V);
/// U[F]; throws UndefinedComposition when some U-set maps an F-set to nothing.
FiniteFilter apply(const FiniteFilter& U, const FiniteFilter& F);
FiniteFilter apply(const FiniteFilter& U, std::size_t x);

// ---------------------------------------------------------------------------
// Structure tables

/// A down-closed family of generators, stored by its maximal elements: the
/// filters of the family are exactly those generated by a nonempty subset of a
/// listed set. Canonical form: sorted antichain without duplicates.
using Generators = std::vector<Set>;

Generators canonical(Generators g);
/// Some listed set contains s (s nonempty).
bool covered(const Generators& g, Set s);

/// Convergence structure: lambda(x) for every point.
struct ConvergenceTable {
    std::size_t size = 0;
    std::vector<Generators> lambda;

    friend bool operator==(const ConvergenceTable&, const ConvergenceTable&) = default;
};

/// Uniform convergence structure: J as a family of filters on X x X.
struct UniformTable {
    std::size_t size = 0;
    Generators J;

    friend bool operator==(const UniformTable&, const UniformTable&) = default;
};

ConvergenceTable make_convergence(std::size_t size, std::vector<Generators> lambda);
UniformTable make_uniform(std::size_t size, Generators J);

/// Outcome of an axiom check. axioms[k] is the verdict for axiom k (1-based;
/// index 0 unused). Upward closure holds by representation.
struct Verdict {
    std::array<bool, 6> axioms{true, true, true, true, true, true};
    bool pass = true;
    int violated = 0;  // first failing axiom, 0 when passing
    std::string witness;
    bool upward_closure_by_construction = true;
    bool hausdorff = false;  // convergence structures only
};

/// Axioms of a convergence structure: (1) [x] in lambda(x), (2) closed under
/// intersections, (3) upward closed; plus the Hausdorff flag.
Verdict check_convergence_structure(const ConvergenceTable& t);

/// Axioms of a uniform convergence structure: (1) [x]x[x] in J, (2) closed under
/// intersections, (3) upward closed, (4) closed under inverses, (5) closed
/// under defined compositions. skip_axiom disables one check (fault injection).
Verdict check_ucs(const UniformTable& t, int skip_axiom = 0);

/// F in lambda_J(x) iff [x] x F in J.
ConvergenceTable induced_convergence(const UniformTable& t);

/// Map X -> X_i, given by images.
using Map = std::vector<std::size_t>;

/// U in J iff (f_i x f_i)(U) in J_i for every i.
UniformTable initial_ucs(std::size_t size, const std::vector<Map>& maps, const std::vector<UniformTable>& structures);
/// F in lambda(x) iff f_i(F) in lambda_i(f_i(x)) for every i.
ConvergenceTable initial_convergence(std::size_t size, const std::vector<Map>& maps,
                                     const std::vector<ConvergenceTable>& structures);

/// induced_convergence(initial_ucs(...)) == initial_convergence(..., induced_convergence(J_i)).
bool check_initial_compat(std::size_t size, const std::vector<Map>& maps, const std::vector<UniformTable>& structures);

/// F x F in J.
bool is_cauchy(const FiniteFilter& F, const UniformTable& t);

struct ContinuityVerdict {
    bool pass = true;
    std::optional<Set> witness;  // a generator U of J_X with (f x f)(U) not in J_Y
};

/// (f x f)(U) in J_Y for every U in J_X.
ContinuityVerdict check_uniform_continuity(const Map& f, const UniformTable& tX, const UniformTable& tY);

} // namespace ocm::filters
