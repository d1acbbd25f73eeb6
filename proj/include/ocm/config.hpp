#pragma once

#include "ocm/domain.hpp"
#include "ocm/expr.hpp"
#include "ocm/grid_fn.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ocm {

/// Expression text with its position in the config file (1-based line, and
/// 0-based column of the first character inside the quotes).
struct SourceText {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Problem file contents. Format: sections [domain], [system], [solve] with
/// `key = value` lines; values are numbers, double-quoted strings or
/// single-line bracketed arrays; `#` starts a comment.
struct ProblemConfig {
    // [domain]
    Point lower;
    Point upper;
    std::vector<std::size_t> cells;
    // [system]
    int n = 0;
    int K = 0;
    int m = 0;
    std::vector<SourceText> equations;
    std::vector<SourceText> rhs;
    // [solve]
    double epsilon = 0.0;
    std::size_t refine_steps = 10;
    std::size_t samples_per_cell = 8;
    double margin = 0.05;
    std::uint64_t seed = 42;
    double eta = 1e-9;
    /// Lattice nodes per axis for the refinement images.
    std::vector<std::size_t> lattice;
};

/// Throws ConfigError (with the offending line) on syntax errors, unknown or
/// missing keys and violated invariants.
ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::filesystem::path& path);

struct Problem {
    PdeSystem system;
    Rhs rhs;
    CellPartition partition;
    Lattice lattice;
};

/// Parses the expressions (ParseError positions refer to the config file) and
/// builds the partition and lattice.
Problem build_problem(const ProblemConfig& cfg);

} // namespace ocm
