#pragma once

// Naive reference semantics for the finite filter layer: filters are explicit
// families of subsets (a bitmask over the power set) and every axiom is
// evaluated literally over all filters of the ground set. Only usable for
// universes of at most 4 elements (convergence tables on |X| <= 4, uniform
// tables on |X| <= 2).

#include "ocm/filters.hpp"

#include <cstdint>
#include <vector>

namespace ocm::filters::brute {

/// Bit A is set iff subset A belongs to the family.
using Family = std::uint64_t;

inline constexpr std::size_t kMaxUniverse = 4;

bool is_filter(Family f, std::size_t universe);
/// Every filter on a universe, found by testing all families.
const std::vector<Family>& all_filters(std::size_t universe);
/// Upward closure of a list of sets.
Family upward(const std::vector<Set>& sets, std::size_t universe);
std::vector<Set> members(Family f, std::size_t universe);

/// lambda(x) as explicit sets of filters.
std::vector<std::vector<Family>> expand(const ConvergenceTable& t);
/// J as an explicit set of filters on X x X.
std::vector<Family> expand(const UniformTable& t);

/// Literal axiom evaluation; same Verdict layout as the fast checkers (no witnesses).
Verdict check_convergence_structure(const ConvergenceTable& t);
Verdict check_ucs(const UniformTable& t);

std::vector<std::vector<Family>> induced_convergence(const UniformTable& t);
std::vector<Family> initial_ucs(std::size_t size, const std::vector<Map>& maps, const std::vector<UniformTable>& structures);
std::vector<std::vector<Family>> initial_convergence(std::size_t size, const std::vector<Map>& maps,
                                                     const std::vector<ConvergenceTable>& structures);
bool is_cauchy(const FiniteFilter& F, const UniformTable& t);
bool uniformly_continuous(const Map& f, const UniformTable& tX, const UniformTable& tY);

} // namespace ocm::filters::brute
