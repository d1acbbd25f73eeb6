#include "ocm/approx.hpp"

#include "ocm/errors.hpp"
#include "ocm/ext_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ocm {

namespace {

constexpr double kJetTolerance = 1e-10;
constexpr double kScanLimit = 1e6;
constexpr int kMaxSweeps = 50;
constexpr int kDeltaBisections = 40;
constexpr double kCollapseFraction = 1e-6;
constexpr std::size_t kOffenders = 5;

std::string point_text(std::span<const double> x) {
    std::string s = "(";
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (d) s += ", ";
        s += to_string(ExtReal(x[d]));
    }
    return s + ")";
}

double max_width(const Box& b) {
    double w = 0.0;
    for (std::size_t d = 0; d < b.dim(); ++d) w = std::max(w, b.width(d));
    return w;
}

// Scan points 0, 1, 2, 4, ..., 2^19, 1e6.
std::vector<double> scan_points() {
    std::vector<double> p{0.0};
    for (double t = 1.0; t < kScanLimit; t *= 2) p.push_back(t);
    p.push_back(kScanLimit);
    return p;
}

struct Root {
    bool found = false;
    double t = 0.0;
};

// Root of g on [-1e6, 1e6] by bracket scan outward from 0, then bisection to
// the resolution of doubles. g returns false where undefined.
template <class G>
Root find_root(G&& g) {
    static const std::vector<double> pts = scan_points();
    auto eval = [&](double t, double& v) { return g(t, v) && std::isfinite(v); };
    auto bisect = [&](double lo, double glo, double hi, double ghi) -> Root {
        Root best{true, std::abs(glo) <= std::abs(ghi) ? lo : hi};
        double best_abs = std::min(std::abs(glo), std::abs(ghi));
        for (int it = 0; it < 2000; ++it) {
            double mid = lo + (hi - lo) / 2;
            if (!(mid > lo && mid < hi)) break;
            double gm;
            if (!eval(mid, gm)) break;
            if (std::abs(gm) < best_abs) {
                best_abs = std::abs(gm);
                best.t = mid;
            }
            if (gm == 0.0) break;
            if ((gm < 0) == (glo < 0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
                ghi = gm;
            }
        }
        return best;
    };

    double g0 = 0.0;
    bool d0 = eval(0.0, g0);
    if (d0 && g0 == 0.0) return {true, 0.0};
    double gp_prev = g0, gn_prev = g0;
    bool dp_prev = d0, dn_prev = d0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        for (int side = 0; side < 2; ++side) {
            double t = side == 0 ? pts[k] : -pts[k];
            double prev_t = side == 0 ? pts[k - 1] : -pts[k - 1];
            double& g_prev = side == 0 ? gp_prev : gn_prev;
            bool& d_prev = side == 0 ? dp_prev : dn_prev;
            double gt = 0.0;
            bool dt = eval(t, gt);
            if (dt && gt == 0.0) return {true, t};
            if (dt && d_prev && (gt < 0) != (g_prev < 0)) {
                return side == 0 ? bisect(prev_t, g_prev, t, gt) : bisect(t, gt, prev_t, g_prev);
            }
            g_prev = gt;
            d_prev = dt;
        }
    }
    return {};
}

// Reusable evaluation buffers for one thread.
struct Scratch {
    std::vector<double> xi, F, fx;
    explicit Scratch(const PdeSystem& sys)
        : xi(sys.M()), F(static_cast<std::size_t>(sys.K())), fx(static_cast<std::size_t>(sys.K())) {}
};

// Residual T_i P(x) - f_i(x) inside [lo - eta, hi + eta] for every i.
bool residual_ok(const PdeSystem& sys, const Rhs& f, const TaylorBasis& basis, const TaylorPiece& piece,
                 std::span<const double> x, const ResidualWindow& w, double eta, Scratch& s) {
    piece.jets(basis, x, s.xi);
    if (!sys.try_eval(x, s.xi, s.F) || !f.try_eval(x, s.fx)) return false;
    for (std::size_t i = 0; i < s.F.size(); ++i) {
        double r = s.F[i] - s.fx[i];
        if (!(r >= w.lo - eta && r <= w.hi + eta)) return false;
    }
    return true;
}

// Tensor grid with q points per axis over box, endpoints included.
template <class Visit>
bool for_grid(const Box& box, std::size_t q, Visit&& visit) {
    const std::size_t n = box.dim();
    std::vector<std::size_t> idx(n, 0);
    Point x(n);
    for (;;) {
        for (std::size_t d = 0; d < n; ++d) {
            if (q < 2 || box.width(d) == 0.0) {
                x[d] = q < 2 ? box.lower[d] + box.width(d) / 2 : box.lower[d];
            } else if (idx[d] + 1 == q) {
                x[d] = box.upper[d];
            } else {
                x[d] = box.lower[d] + box.width(d) * static_cast<double>(idx[d]) / static_cast<double>(q - 1);
            }
        }
        if (!visit(x)) return false;
        std::size_t d = n;
        while (d > 0) {
            --d;
            if (++idx[d] < std::max<std::size_t>(q, 1)) break;
            idx[d] = 0;
            if (d == 0) return true;
        }
        if (n == 0) return true;
    }
}

std::size_t ball_points(const ApproxOptions& o, std::size_t n) {
    if (o.ball_points) return o.ball_points;
    return n == 1 ? 33 : n == 2 ? 17 : 9;
}

ResidualWindow window_of(const ApproxOptions& o, double eps) {
    return o.window ? *o.window : ResidualWindow::band(eps);
}

bool ball_passes(const PdeSystem& sys, const Rhs& f, const TaylorBasis& basis, const TaylorPiece& piece,
                 const Box& domain, std::span<const double> x0, double delta, const ResidualWindow& w,
                 const ApproxOptions& o, Scratch& s) {
    Box ball{Point(x0.size()), Point(x0.size())};
    for (std::size_t d = 0; d < x0.size(); ++d) {
        ball.lower[d] = std::max(domain.lower[d], x0[d] - delta);
        ball.upper[d] = std::min(domain.upper[d], x0[d] + delta);
    }
    return for_grid(ball, ball_points(o, x0.size()),
                    [&](const Point& x) { return residual_ok(sys, f, basis, piece, x, w, o.eta, s); });
}

std::vector<double> rhs_target(const Rhs& f, std::span<const double> x, double eps) {
    std::vector<double> t(f.K());
    if (!f.try_eval(x, t)) throw EvalUndefined("right-hand side undefined at " + point_text(x));
    for (double& v : t) v -= eps / 2;
    return t;
}

void check_inputs(const PdeSystem& sys, const Rhs& f, std::size_t dim, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (f.K() != static_cast<std::size_t>(sys.K())) throw std::invalid_argument("right-hand side has the wrong number of components");
    if (static_cast<std::size_t>(sys.n()) != dim || f.n() != sys.n()) throw std::invalid_argument("system dimension does not match the domain");
}

} // namespace

std::vector<std::size_t> default_pivots(const PdeSystem& sys) {
    const std::size_t A = sys.alphas().size();
    std::vector<std::size_t> pivots;
    for (int i = 1; i <= sys.K(); ++i) {
        const auto& slots = sys.program(static_cast<std::size_t>(i - 1)).slots();
        if (slots.empty())
            throw std::invalid_argument("equation " + std::to_string(i) + " does not depend on the unknowns");
        auto taken = [&](std::size_t s) { return std::find(pivots.begin(), pivots.end(), s) != pivots.end(); };
        std::optional<std::size_t> pick;
        const std::size_t zero = sys.slot(i, 0);
        if (sys.program(static_cast<std::size_t>(i - 1)).references(zero) && !taken(zero)) pick = zero;
        for (std::size_t s : slots) {
            if (pick) break;
            if (s / A == static_cast<std::size_t>(i - 1) && !taken(s)) pick = s;
        }
        for (std::size_t s : slots) {
            if (pick) break;
            if (!taken(s)) pick = s;
        }
        if (!pick) throw std::invalid_argument("equation " + std::to_string(i) + " has no free pivot slot");
        pivots.push_back(*pick);
    }
    return pivots;
}

JetPoint solve_jet(const PdeSystem& sys, std::span<const double> x0, std::span<const double> target,
                   const std::vector<double>& anchor, const std::vector<std::size_t>& pivots_in) {
    const std::size_t K = static_cast<std::size_t>(sys.K());
    if (x0.size() != static_cast<std::size_t>(sys.n())) throw std::invalid_argument("solve_jet: x0 has the wrong dimension");
    if (target.size() != K) throw std::invalid_argument("solve_jet: one target per equation required");
    JetPoint jet{Point(x0.begin(), x0.end()), anchor.empty() ? std::vector<double>(sys.M(), 0.0) : anchor};
    if (jet.xi.size() != sys.M()) throw std::invalid_argument("solve_jet: anchor has the wrong size");
    const std::vector<std::size_t> pivots = pivots_in.empty() ? default_pivots(sys) : pivots_in;
    if (pivots.size() != K) throw std::invalid_argument("solve_jet: one pivot per equation required");
    for (std::size_t i = 0; i < K; ++i) {
        if (pivots[i] >= sys.M()) throw std::invalid_argument("solve_jet: pivot slot out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (pivots[i] == pivots[j]) throw std::invalid_argument("solve_jet: pivot slots must be distinct");
    }

    std::vector<double> F(K);
    auto residual = [&](std::size_t i, double& r) {
        double v;
        if (!sys.program(i).eval(x0, jet.xi, v)) return false;
        r = v - target[i];
        return true;
    };
    auto fail = [&](std::size_t i, const std::string& why) {
        return RangeViolation(i + 1, "equation " + std::to_string(i + 1) + " at x0 = " + point_text(x0) + ": " + why +
                                         " (target " + to_string(ExtReal(target[i])) +
                                         " is outside the attainable range, or the pivot slot cannot reach it)");
    };

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (std::size_t i = 0; i < K; ++i) {
            double r;
            if (residual(i, r) && std::abs(r) <= kJetTolerance * 1e-2) continue;
            const std::size_t slot = pivots[i];
            Root root = find_root([&](double t, double& v) {
                jet.xi[slot] = t;
                return residual(i, v);
            });
            if (!root.found) throw fail(i, "no sign change of the pivot within |value| <= 1e6");
            jet.xi[slot] = root.t;
        }
        bool done = true;
        for (std::size_t i = 0; i < K; ++i) {
            double r;
            if (!residual(i, r)) throw fail(i, "F undefined at the solved jet");
            if (!(std::abs(r) <= kJetTolerance)) done = false;
        }
        if (done) return jet;
        if (K == 1) throw fail(0, "bisection did not reach the tolerance");
    }
    throw fail(0, "coupled pivot sweeps did not converge");
}

LocalApprox local_approx(const PdeSystem& sys, const Rhs& f, const Box& domain, std::span<const double> x0, double eps,
                         const ApproxOptions& opts, std::optional<double> delta_start) {
    check_inputs(sys, f, domain.dim(), eps);
    if (!domain.contains(x0)) throw DomainError("local_approx: x0 outside the domain");
    const TaylorBasis basis(sys.n(), sys.m());
    JetPoint jet = solve_jet(sys, x0, rhs_target(f, x0, eps));
    TaylorPiece piece = taylor_poly(basis, jet);
    const ResidualWindow w = window_of(opts, eps);
    const double floor = kCollapseFraction * max_width(domain);
    Scratch s(sys);

    double delta = delta_start ? *delta_start : domain.diameter();
    if (!(delta > 0.0)) delta = floor;
    auto passes = [&](double d) { return ball_passes(sys, f, basis, piece, domain, x0, d, w, opts, s); };
    if (passes(delta)) return {delta, std::move(piece), std::move(jet)};
    double fail_at = delta;
    for (;;) {
        delta /= 2;
        if (delta < floor)
            throw DeltaCollapse("local_approx: radius fell below " + to_string(ExtReal(floor)) + " at x0 = " +
                                point_text(x0) + " without the band check passing");
        if (passes(delta)) break;
        fail_at = delta;
    }
    double lo = delta, hi = fail_at;
    for (int it = 0; it < kDeltaBisections; ++it) {
        double mid = lo + (hi - lo) / 2;
        if (!(mid > lo && mid < hi)) break;
        if (passes(mid)) lo = mid;
        else hi = mid;
    }
    return {lo, std::move(piece), std::move(jet)};
}

ResidualCertificate check_residual(const PdeSystem& sys, const PiecewisePoly& U, const Rhs& f, double eps,
                                   const std::vector<Point>& samples, double eta,
                                   std::optional<ResidualWindow> window, Exec exec) {
    check_inputs(sys, f, U.partition().dim(), eps);
    const std::size_t K = static_cast<std::size_t>(sys.K());
    const ResidualWindow w = window ? *window : ResidualWindow::band(eps);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> r(samples.size() * K);
    std::vector<std::size_t> where(samples.size());
    for_each_index(samples.size(), exec, [&](std::size_t k) {
        const Point& x = samples[k];
        auto s = U.partition().locate(x);
        if (!s) throw DomainError("check_residual: sample outside the domain");
        if (U.partition().on_skeleton(x)) throw DomainError("check_residual: sample on the skeleton " + point_text(x));
        where[k] = *s;
        thread_local std::vector<double> F, fx;
        F.resize(K);
        fx.resize(K);
        bool ok = apply_piece(sys, U, *s, x, F) && f.try_eval(x, fx);
        for (std::size_t i = 0; i < K; ++i) r[k * K + i] = ok ? F[i] - fx[i] : inf;
    });

    ResidualCertificate cert;
    cert.eps = eps;
    cert.eta = eta;
    cert.lo = w.lo;
    cert.hi = w.hi;
    cert.insufficient = samples.empty();
    cert.components.assign(K, ComponentResidual{});
    struct Rank {
        double excess;
        std::size_t k, i;
    };
    std::vector<Rank> ranks;
    ranks.reserve(r.size());
    for (std::size_t i = 0; i < K; ++i) {
        auto& c = cert.components[i];
        c.samples = samples.size();
        c.min_residual = samples.empty() ? 0.0 : inf;
        c.max_residual = samples.empty() ? 0.0 : -inf;
    }
    for (std::size_t k = 0; k < samples.size(); ++k) {
        for (std::size_t i = 0; i < K; ++i) {
            double v = r[k * K + i];
            auto& c = cert.components[i];
            c.min_residual = std::min(c.min_residual, v);
            c.max_residual = std::max(c.max_residual, v);
            if (!(v >= w.lo - eta && v <= w.hi + eta)) c.pass = false;
            ranks.push_back({std::max(v - w.hi, w.lo - v), k, i});
        }
    }
    for (const auto& c : cert.components) cert.pass = cert.pass && c.pass;

    const std::size_t top = std::min(kOffenders, ranks.size());
    std::partial_sort(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(top), ranks.end(),
                      [](const Rank& a, const Rank& b) {
                          if (a.excess != b.excess) return a.excess > b.excess;
                          if (a.k != b.k) return a.k < b.k;
                          return a.i < b.i;
                      });
    for (std::size_t t = 0; t < top; ++t)
        cert.worst.push_back({samples[ranks[t].k], ranks[t].i, where[ranks[t].k], r[ranks[t].k * K + ranks[t].i]});
    return cert;
}

GlobalApprox global_approx(const PdeSystem& sys, const Rhs& f, const CellPartition& p, double eps,
                           const ApproxOptions& opts) {
    check_inputs(sys, f, p.dim(), eps);
    const std::size_t n = p.dim();
    const TaylorBasis basis(sys.n(), sys.m());
    const ResidualWindow w = window_of(opts, eps);
    const Box& domain = p.bounds();
    const double floor = kCollapseFraction * max_width(domain);
    const std::size_t verify_points = opts.verify_points ? opts.verify_points : n == 1 ? 5 : 3;

    std::vector<Box> cells;
    std::vector<std::vector<std::vector<double>>> breaks;
    std::vector<TaylorPiece> pieces;
    std::vector<double> cell_delta;

    for (std::size_t c = 0; c < p.cell_count(); ++c) {
        const Box& cell = p.cell(c);
        const double diam = cell.diameter();

        // Probe grid {lower, mid, upper}^n.
        std::vector<Point> probes;
        for_grid(cell, 3, [&](const Point& x) {
            probes.push_back(x);
            return true;
        });
        std::vector<double> probe_delta(probes.size());
        for_each_index(probes.size(), opts.exec, [&](std::size_t k) {
            probe_delta[k] = local_approx(sys, f, domain, probes[k], eps, opts, diam).delta;
        });
        double delta = *std::min_element(probe_delta.begin(), probe_delta.end());

        for (;;) {
            CellPartition local = subdivide(build_partition(cell, std::vector<std::size_t>(n, 1)), delta);
            const std::size_t count = local.subcell_count();
            std::vector<TaylorPiece> local_pieces(count);
            std::vector<char> ok(count, 0);
            for_each_index(count, opts.exec, [&](std::size_t s) {
                Box sub = local.subcell(s);
                Point a = sub.center();
                local_pieces[s] = taylor_poly(basis, solve_jet(sys, a, rhs_target(f, a, eps)));
                Scratch scratch(sys);
                ok[s] = for_grid(sub, verify_points, [&](const Point& x) {
                    return residual_ok(sys, f, basis, local_pieces[s], x, w, opts.eta, scratch);
                });
            });
            if (std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; })) {
                cells.push_back(cell);
                breaks.push_back(local.breakpoints(0));
                for (auto& piece : local_pieces) pieces.push_back(std::move(piece));
                cell_delta.push_back(delta);
                break;
            }
            delta /= 2;
            if (delta < floor)
                throw DeltaCollapse("global_approx: subdivision radius fell below " + to_string(ExtReal(floor)) +
                                    " in cell " + std::to_string(c) + " without every subcell passing");
        }
    }

    CellPartition refined(p.bounds(), p.cells_per_axis(), std::move(cells), std::move(breaks));
    PiecewisePoly U(std::move(refined), sys.K(), sys.m(), std::move(pieces));
    auto samples = sample_points(U.partition(), opts.samples_per_cell, opts.margin, opts.seed);
    ResidualCertificate cert = check_residual(sys, U, f, eps, samples, opts.eta, std::nullopt, opts.exec);
    return {std::move(U), std::move(cert), std::move(cell_delta)};
}

void write_certificate_csv(std::ostream& os, const ResidualCertificate& cert) {
    os << "component,samples,min_residual,max_residual,eps,eta,pass\n";
    for (std::size_t i = 0; i < cert.components.size(); ++i) {
        const auto& c = cert.components[i];
        os << (i + 1) << ',' << c.samples << ',' << to_string(ExtReal(c.min_residual)) << ','
           << to_string(ExtReal(c.max_residual)) << ',' << to_string(ExtReal(cert.eps)) << ','
           << to_string(ExtReal(cert.eta)) << ',' << (c.pass ? "true" : "false") << '\n';
    }
}

} // namespace ocm
