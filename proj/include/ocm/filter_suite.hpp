#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ocm::filters {

struct SuiteOptions {
    /// Disable one check_ucs axiom (fault injection).
    int drop_axiom = 0;
    /// Run no instances; the result is a vacuous pass flagged insufficient.
    bool no_instances = false;
    std::uint64_t seed = 7;
    std::size_t random_initial = 200;
    std::size_t random_triples = 2000;
};

/// One verdict on one generated instance. axiom 0 marks checks that are not
/// numbered axioms (Hausdorff flag, equalities, laws).
struct SuiteRow {
    std::string check;
    std::string instance;
    int axiom = 0;
    bool expected = true;
    bool got = true;
    bool pass() const { return expected == got; }
};

struct SuiteSummary {
    std::string check;
    int axiom;
    std::size_t instances;
    std::size_t failures;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;
    bool insufficient = false;

    bool pass() const;
    /// Per (check, axiom) counts, in first-appearance order.
    std::vector<SuiteSummary> summary() const;
};

/// Checker verdicts against the brute-force oracle on exhaustively enumerated
/// structure tables (convergence |X| <= 3, uniform |X| <= 2), relation algebra
/// laws, Cauchy and uniform-continuity checks, and random instances of the
/// induced/initial compatibility.
SuiteResult run_filter_suite(const SuiteOptions& opts = {});

/// check,instance,axiom,expected,got,pass
void write_suite_csv(std::ostream& os, const SuiteResult& r);

/// All antichains of nonempty subsets of a universe (universe <= 4).
std::vector<std::vector<std::uint64_t>> antichains(std::size_t universe);

} // namespace ocm::filters
