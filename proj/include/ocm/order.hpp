#pragma once

#include "ocm/approx.hpp"
#include "ocm/baire.hpp"
#include "ocm/domain.hpp"
#include "ocm/expr.hpp"
#include "ocm/grid_fn.hpp"
#include "ocm/piecewise.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace ocm {

/// f <= g at every node off gamma and off both masks. Throws
/// std::invalid_argument when the lattices differ.
bool le_mod_nd(const GridFn& f, const GridFn& g, const Skeleton& gamma);

/// U <=_T V: the lattice images of T U and T V compare componentwise off both skeletons.
bool pullback_le(const PdeSystem& sys, const PiecewisePoly& U, const PiecewisePoly& V, const Lattice& lattice);

/// Witness pairs (lambda_n, mu_n), n = 1..N.
struct OrderIntervalSeq {
    std::vector<GridFn> lambda;
    std::vector<GridFn> mu;

    std::size_t size() const { return lambda.size(); }
};

/// Checks, on the prefix of length N and at nodes off x's mask: lambda_n
/// nondecreasing, mu_n nonincreasing, lambda_n <= x_n <= mu_n, lambda_n <= x <= mu_n,
/// and max(mu_N - lambda_N) <= tol.
bool order_converges(const std::vector<GridFn>& xs, const GridFn& x, const OrderIntervalSeq& witnesses, double tol);

/// Nesting (lambda_n nondecreasing, mu_n nonincreasing) and, on every subbox,
/// either max(mu_N - lambda_N) <= tol or lambda_N > mu_N somewhere in it.
bool nested_interval_valid(const OrderIntervalSeq& seq, const std::vector<Box>& subboxes, double tol);

struct TraceStep {
    std::size_t n;
    double eps;
    PiecewisePoly V;
    /// Lattice image of T V_n per component, after the monotonicity repair.
    std::vector<GridFn> image;
    ResidualCertificate cert;
    /// sup |image - f| over nodes off the image mask (max over components).
    double gap;
    /// Nodes where the image fell more than eta below its predecessor.
    std::size_t repairs;
};

struct SolutionTrace {
    Lattice lattice;
    /// f sampled on the lattice, per component.
    std::vector<GridFn> rhs;
    std::vector<TraceStep> steps;
    /// Per component: lower = normalize_nls(final image), upper = f.
    std::vector<EnvelopePair> envelope;
    std::size_t repairs = 0;

    std::size_t size() const { return steps.size(); }
};

/// Hook applied to each step's raw image before the repair (fault injection).
using ImageHook = std::function<void(std::size_t n, std::vector<GridFn>& image)>;

struct RefineOptions {
    ApproxOptions approx;
    /// Run step n with the residual window centred at -1/(2n) with radius
    /// 1/(4n(n+1)), which makes consecutive images nested. Ignored when n_max == 1.
    bool centred_schedule = true;
    ImageHook hook;
};

/// Runs global_approx with eps = 1/n for n = 1..n_max, embeds each image on the
/// lattice and keeps the running nodewise maximum.
SolutionTrace refine_solution(const PdeSystem& sys, const Rhs& f, const CellPartition& p, std::size_t n_max,
                              const Lattice& lattice, const RefineOptions& opts = {});

/// Per component: sup |image_{n1} - image_{n2}| over nodes off both masks (1-based steps).
std::vector<double> cauchy_gap(const SolutionTrace& trace, std::size_t n1, std::size_t n2);

/// n,eps,max_residual,min_residual,gap,repairs
void write_trace_csv(std::ostream& os, const SolutionTrace& trace);

} // namespace ocm
