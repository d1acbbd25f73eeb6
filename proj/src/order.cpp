#include "ocm/order.hpp"

#include "ocm/ext_real.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ocm {

namespace {

void require_same_lattice(const GridFn& a, const GridFn& b) {
    if (!(a.lattice() == b.lattice())) throw std::invalid_argument("grid functions live on different lattices");
}

bool le_off_masks(const GridFn& f, const GridFn& g, const Skeleton* gamma) {
    require_same_lattice(f, g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.masked(i) || g.masked(i)) continue;
        if (gamma && gamma->contains(f.lattice().point(i))) continue;
        if (f[i] > g[i]) return false;
    }
    return true;
}

// Nodewise a <= b at the given nodes.
bool le_at(const GridFn& a, const GridFn& b, const std::vector<std::size_t>& nodes) {
    require_same_lattice(a, b);
    for (std::size_t i : nodes)
        if (a[i] > b[i]) return false;
    return true;
}

double max_gap_at(const GridFn& lo, const GridFn& hi, const std::vector<std::size_t>& nodes) {
    double g = 0.0;
    for (std::size_t i : nodes) {
        double d = hi[i].value() - lo[i].value();
        if (std::isnan(d)) return INFINITY;
        g = std::max(g, d);
    }
    return g;
}

bool nested(const OrderIntervalSeq& seq, const std::vector<std::size_t>& nodes) {
    for (std::size_t k = 1; k < seq.size(); ++k) {
        if (!le_at(seq.lambda[k - 1], seq.lambda[k], nodes)) return false;
        if (!le_at(seq.mu[k], seq.mu[k - 1], nodes)) return false;
    }
    return true;
}

std::vector<std::size_t> all_nodes(const GridFn& f) {
    std::vector<std::size_t> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
}

std::vector<std::size_t> unmasked_nodes(const GridFn& f) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!f.masked(i)) v.push_back(i);
    return v;
}

} // namespace

bool le_mod_nd(const GridFn& f, const GridFn& g, const Skeleton& gamma) { return le_off_masks(f, g, &gamma); }

bool pullback_le(const PdeSystem& sys, const PiecewisePoly& U, const PiecewisePoly& V, const Lattice& lattice) {
    auto a = embed_image(sys, U, lattice);
    auto b = embed_image(sys, V, lattice);
    const Skeleton gamma = U.skeleton();
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!le_mod_nd(a[k], b[k], gamma)) return false;
    return true;
}

bool order_converges(const std::vector<GridFn>& xs, const GridFn& x, const OrderIntervalSeq& w, double tol) {
    if (xs.empty() || w.lambda.size() != xs.size() || w.mu.size() != xs.size()) return false;
    const auto nodes = unmasked_nodes(x);
    if (!nested(w, nodes)) return false;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!le_at(w.lambda[k], xs[k], nodes) || !le_at(xs[k], w.mu[k], nodes)) return false;
        if (!le_at(w.lambda[k], x, nodes) || !le_at(x, w.mu[k], nodes)) return false;
    }
    return max_gap_at(w.lambda.back(), w.mu.back(), nodes) <= tol;
}

bool nested_interval_valid(const OrderIntervalSeq& seq, const std::vector<Box>& subboxes, double tol) {
    if (seq.size() == 0 || seq.mu.size() != seq.lambda.size()) return false;
    if (!nested(seq, all_nodes(seq.lambda.front()))) return false;
    const GridFn& lo = seq.lambda.back();
    const GridFn& hi = seq.mu.back();
    for (const Box& box : subboxes) {
        std::vector<std::size_t> inside;
        bool emptied = false;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!box.contains(lo.lattice().point(i))) continue;
            inside.push_back(i);
            if (lo[i] > hi[i]) emptied = true;
        }
        if (!emptied && max_gap_at(lo, hi, inside) > tol) return false;
    }
    return true;
}

SolutionTrace refine_solution(const PdeSystem& sys, const Rhs& f, const CellPartition& p, std::size_t n_max,
                              const Lattice& lattice, const RefineOptions& opts) {
    if (n_max < 1) throw std::invalid_argument("refine_solution: n_max must be >= 1");
    const std::size_t K = static_cast<std::size_t>(sys.K());
    SolutionTrace trace{lattice, {}, {}, {}, 0};
    for (std::size_t k = 0; k < K; ++k)
        trace.rhs.push_back(GridFn::sample(lattice, [&](std::span<const double> x) { return f(x)[k]; }));

    const double eta = opts.approx.eta;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double eps = 1.0 / static_cast<double>(n);
        ApproxOptions ao = opts.approx;
        if (opts.centred_schedule && n_max > 1)
            ao.window = ResidualWindow::centred(eps, 1.0 / (4.0 * static_cast<double>(n) * static_cast<double>(n + 1)));
        GlobalApprox g = global_approx(sys, f, p, eps, ao);
        std::vector<GridFn> image = embed_image(sys, g.U, lattice, ao.exec);
        if (opts.hook) opts.hook(n, image);

        std::size_t repairs = 0;
        if (!trace.steps.empty()) {
            const auto& prev = trace.steps.back().image;
            for (std::size_t k = 0; k < K; ++k) {
                std::vector<ExtReal> v = image[k].values();
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (v[i].value() < prev[k][i].value() - eta) ++repairs;
                    v[i] = max(v[i], prev[k][i]);
                }
                image[k] = image[k].with_values(std::move(v));
            }
        }

        double gap = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t i = 0; i < image[k].size(); ++i)
                if (!image[k].masked(i)) gap = std::max(gap, std::abs(image[k][i].value() - trace.rhs[k][i].value()));

        trace.repairs += repairs;
        trace.steps.push_back(TraceStep{n, eps, std::move(g.U), std::move(image), std::move(g.cert), gap, repairs});
    }

    for (std::size_t k = 0; k < K; ++k) {
        const GridFn& last = trace.steps.back().image[k];
        GridFn upper(lattice, trace.rhs[k].values(), last.codims());
        trace.envelope.push_back(EnvelopePair{normalize_nls(last, opts.approx.exec), std::move(upper)});
    }
    return trace;
}

std::vector<double> cauchy_gap(const SolutionTrace& trace, std::size_t n1, std::size_t n2) {
    if (n1 < 1 || n2 < 1 || n1 > trace.size() || n2 > trace.size())
        throw std::out_of_range("cauchy_gap: step index outside the trace");
    const auto& a = trace.steps[n1 - 1].image;
    const auto& b = trace.steps[n2 - 1].image;
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i < a[k].size(); ++i)
            if (!a[k].masked(i) && !b[k].masked(i))
                out[k] = std::max(out[k], std::abs(a[k][i].value() - b[k][i].value()));
    return out;
}

void write_trace_csv(std::ostream& os, const SolutionTrace& trace) {
    os << "n,eps,max_residual,min_residual,gap,repairs\n";
    for (const auto& s : trace.steps) {
        double hi = -INFINITY, lo = INFINITY;
        for (const auto& c : s.cert.components) {
            hi = std::max(hi, c.max_residual);
            lo = std::min(lo, c.min_residual);
        }
        os << s.n << ',' << to_string(ExtReal(s.eps)) << ',' << to_string(ExtReal(hi)) << ','
           << to_string(ExtReal(lo)) << ',' << to_string(ExtReal(s.gap)) << ',' << s.repairs << '\n';
    }
}

} // namespace ocm
