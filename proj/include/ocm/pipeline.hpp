#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace ocm {

/// Process exit codes of the batch driver.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitRange = 3,
    kExitDeltaCollapse = 4,
    kExitCertificate = 5,
};

/// Test hooks; all off in normal operation.
struct RunHooks {
    /// Lower the second refinement image by 0.5 everywhere before the repair.
    bool inject_nonmonotone = false;
    /// Disable one uniform-structure axiom in the checker under test.
    int drop_axiom = 0;
    /// Run the self-check with an empty instance list.
    bool no_instances = false;
};

/// global_approx on the config's problem with eps = epsilon. Writes
/// certificate.csv and report.json into out.
int run_solve(const std::filesystem::path& config, const std::filesystem::path& out, std::ostream& log,
              const RunHooks& hooks = {});

/// refine_solution with n_max = refine_steps. Writes trace.csv,
/// envelope_u<k>.csv (lower envelope on the lattice) and report.json into out.
int run_refine(const std::filesystem::path& config, const std::filesystem::path& out, std::ostream& log,
               const RunHooks& hooks = {});

/// Finite filter instance suite; prints the per-axiom table and, when out is
/// given, writes selfcheck.csv with one row per instance and axiom.
int run_selfcheck(std::ostream& log, const std::optional<std::filesystem::path>& out = std::nullopt,
                  const RunHooks& hooks = {});

} // namespace ocm
