#pragma once

#include "ocm/domain.hpp"
#include "ocm/expr.hpp"
#include "ocm/parallel.hpp"
#include "ocm/piecewise.hpp"
#include "ocm/taylor.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ocm {

/// One pivot slot per equation: the zeroth-order slot of u_i when F_i reads
/// it, else the first slot F_i reads. Throws std::invalid_argument when an
/// equation reads no slot or two equations would share a pivot.
std::vector<std::size_t> default_pivots(const PdeSystem& sys);

/// Jet at x0 equal to anchor except at the pivot slots, with
/// |F_i(x0, xi) - target_i| <= 1e-10. Pivots are solved one equation at a time
/// (bracket scan out to |t| <= 1e6, then bisection), sweeping until all
/// equations hold. Throws RangeViolation naming the failing component.
JetPoint solve_jet(const PdeSystem& sys, std::span<const double> x0, std::span<const double> target,
                   const std::vector<double>& anchor = {}, const std::vector<std::size_t>& pivots = {});

/// Admissible residual window. The standard one-sided band is [-eps, 0]; a
/// centred window [-eps/2 - rho, -eps/2 + rho] (rho <= eps/2) is a tighter
/// band used by the refinement driver.
struct ResidualWindow {
    double lo;
    double hi;

    static ResidualWindow band(double eps) { return {-eps, 0.0}; }
    static ResidualWindow centred(double eps, double rho) { return {-eps / 2 - rho, -eps / 2 + rho}; }
};

struct ApproxOptions {
    double eta = 1e-9;
    /// Residual window; the band [-eps, 0] when unset.
    std::optional<ResidualWindow> window;
    /// Ball verification grid points per axis in local_approx (0: 33 / 17 / 9 for n = 1 / 2 / >2).
    std::size_t ball_points = 0;
    /// Closed-subcell verification grid points per axis in global_approx (0: 5 for n = 1, else 3).
    std::size_t verify_points = 0;
    /// Certificate sampling.
    std::size_t samples_per_cell = 8;
    double margin = 0.05;
    std::uint64_t seed = 42;
    Exec exec = Exec::Parallel;
};

struct LocalApprox {
    double delta;
    TaylorPiece piece;
    JetPoint jet;
};

/// Taylor piece at x0 realising F(x0, xi) = f(x0) - eps/2 and the largest
/// radius (found by halving from delta_start, then bisection) such that the
/// residual stays in the window on a sampling grid of the ball intersected with
/// the domain. delta_start defaults to the domain diameter. Throws
/// RangeViolation, or DeltaCollapse when delta falls below 1e-6 * domain width.
LocalApprox local_approx(const PdeSystem& sys, const Rhs& f, const Box& domain, std::span<const double> x0, double eps,
                         const ApproxOptions& opts = {}, std::optional<double> delta_start = std::nullopt);

struct ComponentResidual {
    std::size_t samples = 0;
    double min_residual = 0.0;
    double max_residual = 0.0;
    bool pass = true;
};

struct Offender {
    Point x;
    std::size_t component;
    std::size_t subcell;
    double residual;
};

struct ResidualCertificate {
    double eps = 0.0;
    double eta = 0.0;
    double lo = 0.0;  // window checked: residual in [lo - eta, hi + eta]
    double hi = 0.0;
    std::vector<ComponentResidual> components;
    /// Samples furthest outside (or closest to leaving) the window, worst first.
    std::vector<Offender> worst;
    bool pass = true;
    /// No samples were checked; pass is vacuous.
    bool insufficient = false;
};

/// Residuals T_i U - f_i at the samples. Samples must be off the skeleton
/// (DomainError otherwise). Points where F or f is undefined count as failures
/// with residual +inf.
ResidualCertificate check_residual(const PdeSystem& sys, const PiecewisePoly& U, const Rhs& f, double eps,
                                   const std::vector<Point>& samples, double eta = 1e-9,
                                   std::optional<ResidualWindow> window = std::nullopt, Exec exec = Exec::Parallel);

struct GlobalApprox {
    PiecewisePoly U;
    ResidualCertificate cert;
    /// Subdivision radius used in every cell.
    std::vector<double> cell_delta;
};

/// Piecewise approximate solution with f - eps <= T U <= f off the skeleton.
/// Each cell is subdivided to the smallest local_approx radius over its 3^n
/// probe points; every subcell gets the piece centred at its centre. A subcell
/// whose closed verification grid leaves the window halves its cell's radius.
/// The certificate is check_residual on sample_points(...) of the result.
GlobalApprox global_approx(const PdeSystem& sys, const Rhs& f, const CellPartition& p, double eps,
                           const ApproxOptions& opts = {});

/// component,samples,min_residual,max_residual,eps,eta,pass
void write_certificate_csv(std::ostream& os, const ResidualCertificate& cert);

} // namespace ocm
