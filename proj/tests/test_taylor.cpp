#include "doctest.h"

#include "ocm/errors.hpp"
#include "ocm/piecewise.hpp"
#include "ocm/taylor.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace ocm;

namespace {

double binom(int k, int i) {
    double r = 1.0;
    for (int t = 1; t <= i; ++t) r = r * (k - i + t) / t;
    return r;
}

// Tensor product of central differences of order alpha_d with step h.
double central_difference(const TaylorPiece& p, const TaylorBasis& basis, std::size_t j, const MultiIndex& alpha,
                          double h) {
    const std::size_t n = alpha.size();
    const std::size_t K = p.coeffs.size() / basis.alphas().size();
    std::vector<int> i(n, 0);
    double sum = 0.0;
    std::vector<double> vals(K);
    while (true) {
        Point x = p.center;
        double w = 1.0;
        for (std::size_t d = 0; d < n; ++d) {
            x[d] += (alpha[d] / 2.0 - i[d]) * h;
            w *= ((i[d] % 2) ? -1.0 : 1.0) * binom(alpha[d], i[d]);
        }
        p.values(basis, x, vals);
        sum += w * vals[j];
        std::size_t d = 0;
        while (d < n && ++i[d] > alpha[d]) i[d++] = 0;
        if (d == n) break;
    }
    return sum / std::pow(h, order(alpha));
}

double fd_estimate(const TaylorPiece& p, const TaylorBasis& basis, std::size_t j, const MultiIndex& alpha) {
    const double h = 0.02;
    const double a = central_difference(p, basis, j, alpha, h);
    const double b = central_difference(p, basis, j, alpha, h / 2);
    return (4 * b - a) / 3;
}

// D^beta P_j(x) written out term by term.
double direct_derivative(const TaylorPiece& p, const MultiIndexSet& alphas, std::size_t j, const MultiIndex& beta,
                         std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const MultiIndex& alpha = alphas[a];
        double term = p.coeffs[j * alphas.size() + a];
        for (std::size_t d = 0; d < alpha.size() && term != 0.0; ++d) {
            if (alpha[d] < beta[d]) {
                term = 0.0;
                break;
            }
            for (int k = 0; k < beta[d]; ++k) term *= alpha[d] - k;
            term *= std::pow(x[d] - p.center[d], alpha[d] - beta[d]);
        }
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("taylor_poly: hand examples") {
    TaylorBasis b1(1, 1);
    TaylorPiece p = taylor_poly(b1, JetPoint{{0.5}, {0.0, 0.45}});
    std::vector<double> v(1);
    for (double x : {0.0, 0.3, 0.5, 0.9}) {
        std::vector<double> pt{x};
        p.values(b1, pt, v);
        CHECK(v[0] == doctest::Approx(0.45 * (x - 0.5)).epsilon(1e-15));
    }

    TaylorPiece z = taylor_poly(b1, JetPoint{{0.5}, {0.0, 0.0}});
    for (double c : z.coeffs) CHECK(c == 0.0);

    TaylorBasis b2(2, 2);
    std::vector<double> xi(6, 0.0);
    xi[b2.alphas().index_of({2, 0})] = 2.0;
    TaylorPiece q = taylor_poly(b2, JetPoint{{0.0, 0.0}, xi});
    for (auto pt : std::vector<std::vector<double>>{{0.3, 0.7}, {-1.5, 2.0}, {2.0, 0.0}}) {
        q.values(b2, pt, v);
        CHECK(v[0] == doctest::Approx(pt[0] * pt[0]).epsilon(1e-15));
    }
    CHECK(fd_estimate(q, b2, 0, {2, 0}) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("taylor_poly rejects incomplete jets") {
    TaylorBasis b(2, 1);
    CHECK_THROWS(taylor_poly(b, JetPoint{{0.0, 0.0}, {1.0, 2.0}}));
    CHECK_THROWS(taylor_poly(b, JetPoint{{0.0}, {1.0, 2.0, 3.0}}));
}

TEST_CASE("jet identity against finite differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 1; n <= 3; ++n) {
        for (int m = 0; m <= 3; ++m) {
            TaylorBasis basis(n, m);
            const std::size_t A = basis.alphas().size();
            for (int trial = 0; trial < 5; ++trial) {
                const std::size_t K = 2;
                JetPoint jet;
                for (int d = 0; d < n; ++d) jet.x0.push_back(u(rng));
                for (std::size_t s = 0; s < K * A; ++s) jet.xi.push_back(u(rng));
                TaylorPiece p = taylor_poly(basis, jet);

                std::vector<double> exact(K * A);
                p.jets(basis, jet.x0, exact);
                for (std::size_t j = 0; j < K; ++j) {
                    for (std::size_t a = 0; a < A; ++a) {
                        const double xi = jet.xi[j * A + a];
                        CAPTURE(n);
                        CAPTURE(m);
                        CAPTURE(a);
                        CHECK(std::abs(exact[j * A + a] - xi) <= 1e-12 * (1 + std::abs(xi)));
                        const double fd = fd_estimate(p, basis, j, basis.alphas()[a]);
                        CHECK(std::abs(fd - xi) <= 1e-6 * (1 + std::abs(xi)));
                    }
                }
            }
        }
    }
}

TEST_CASE("apply_operator: first derivative of a single piece") {
    PdeSystem sys = parse_system("D(u1,(1))", 1, 1, 1);
    CellPartition p = build_partition(Box::make({0.45}, {0.55}), {1});
    TaylorBasis b(1, 1);
    PiecewisePoly U(p, 1, 1, {taylor_poly(b, JetPoint{{0.5}, {0.0, 0.45}})});
    std::vector<double> x{0.47};
    auto r = apply_operator(sys, U, x);
    REQUIRE(r.has_value());
    CHECK((*r)[0] == 0.45);
}

TEST_CASE("apply_operator: undefined on the skeleton, error outside") {
    PdeSystem sys = parse_system("D(u1,(1,0)) + u1", 2, 1, 1);
    CellPartition p = subdivide(build_partition(Box::make({0.0, 0.0}, {1.0, 1.0}), {2, 1}), 0.5);
    TaylorBasis b(2, 1);
    std::vector<TaylorPiece> pieces;
    for (std::size_t s = 0; s < p.subcell_count(); ++s)
        pieces.push_back(taylor_poly(b, JetPoint{p.subcell_center(s), {1.0, 2.0, 3.0}}));
    PiecewisePoly U(p, 1, 1, pieces);
    for (auto x : std::vector<std::vector<double>>{{0.5, 0.3}, {0.1, 0.0}, {0.25, 0.1}, {1.0, 1.0}})
        CHECK_FALSE(apply_operator(sys, U, x).has_value());
    std::vector<double> inside{0.3, 0.3};
    CHECK(apply_operator(sys, U, inside).has_value());
    std::vector<double> outside{1.5, 0.3};
    CHECK_THROWS_AS(apply_operator(sys, U, outside), DomainError);
}

TEST_CASE("apply_operator: u'' + u on x^2") {
    PdeSystem sys = parse_system("D(u1,(2)) + u1", 1, 1, 2);
    CellPartition p = build_partition(Box::make({0.0}, {2.0}), {1});
    TaylorBasis b(1, 2);
    // x^2 about centre 1: value 1, slope 2, curvature 2
    PiecewisePoly U(p, 1, 2, {taylor_poly(b, JetPoint{{1.0}, {1.0, 2.0, 2.0}})});
    std::vector<double> x{1.0};
    auto r = apply_operator(sys, U, x);
    REQUIRE(r.has_value());
    CHECK((*r)[0] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("apply_operator matches eval_F of directly differentiated pieces on 1000 random pairs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const PdeSystem systems[] = {
        parse_system("D(u1,(1))^2 + sin(u1) * x1", 1, 1, 2),
        parse_system("D(u1,(2)) + exp(u1 / 4)", 1, 1, 2),
        parse_system("D(u1,(1,0)) * D(u2,(0,1)) - x2\nD(u2,(2,0)) + D(u1,(1,1)) + cos(u1 * u2)", 2, 2, 2),
        parse_system("D(u1,(0,1,1)) + abs(D(u1,(1,0,0))) * x3", 3, 1, 3),
    };
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const PdeSystem& sys = systems[trial % 4];
        const int n = sys.n();
        Point lo(static_cast<std::size_t>(n), -1.0), hi(static_cast<std::size_t>(n), 1.0);
        CellPartition p = build_partition(Box::make(lo, hi), std::vector<std::size_t>(static_cast<std::size_t>(n), 1));
        TaylorBasis basis(n, sys.m());
        const std::size_t A = basis.alphas().size();
        JetPoint jet;
        jet.x0 = p.subcell_center(0);
        for (auto& c : jet.x0) c += 0.5 * u(rng);
        for (std::size_t s = 0; s < sys.M(); ++s) jet.xi.push_back(2 * u(rng));
        PiecewisePoly U(p, sys.K(), sys.m(), {taylor_poly(basis, jet)});

        Point x(static_cast<std::size_t>(n));
        for (auto& c : x) c = 0.95 * u(rng);
        std::vector<double> jets(sys.M());
        for (std::size_t j = 0; j < static_cast<std::size_t>(sys.K()); ++j)
            for (std::size_t a = 0; a < A; ++a)
                jets[j * A + a] = direct_derivative(U.piece(0), basis.alphas(), j, basis.alphas()[a], x);
        auto expected = eval_F(sys, x, jets);
        auto got = apply_operator(sys, U, x);
        REQUIRE(got.has_value());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::abs((*got)[i] - expected[i]) <= 1e-9 * std::max(1.0, std::abs(expected[i])));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("PiecewisePoly validates its pieces") {
    CellPartition p = subdivide(build_partition(Box::make({0.0}, {1.0}), {1}), 0.5);
    TaylorBasis b(1, 1);
    TaylorPiece good = taylor_poly(b, JetPoint{{0.25}, {0.0, 1.0}});
    TaylorPiece wrong_centre = taylor_poly(b, JetPoint{{0.25}, {0.0, 1.0}});
    CHECK_THROWS(PiecewisePoly(p, 1, 1, {good}));
    CHECK_THROWS(PiecewisePoly(p, 1, 1, {good, wrong_centre}));
}

TEST_CASE("embed_piecewise: single piece regularised at the endpoints") {
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {1});
    TaylorBasis b(1, 1);
    PiecewisePoly U(p, 1, 1, {taylor_poly(b, JetPoint{{0.5}, {0.5, 1.0}})});
    Lattice L = Lattice::uniform(p.bounds(), {11});
    GridFn w = embed_piecewise(U, L)[0];
    for (std::size_t i = 0; i < L.size(); ++i) CHECK(w[i].value() == doctest::Approx(L.axis(0)[i]).epsilon(1e-15));
    CHECK(w.masked(0));
    CHECK(w.masked(10));
}

TEST_CASE("embed_piecewise: continuous across a face") {
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {2});
    TaylorBasis b(1, 2);
    auto poly = [](double x) { return 1 - 2 * x + 3 * x * x; };
    std::vector<TaylorPiece> pieces;
    for (double c : {0.25, 0.75}) pieces.push_back(taylor_poly(b, JetPoint{{c}, {poly(c), -2 + 6 * c, 6.0}}));
    PiecewisePoly U(p, 1, 2, pieces);
    Lattice L = Lattice::uniform(p.bounds(), {21});
    GridFn w = embed_piecewise(U, L)[0];
    for (std::size_t i = 0; i < L.size(); ++i)
        CHECK(w[i].value() == doctest::Approx(poly(L.axis(0)[i])).epsilon(1e-14));
}

TEST_CASE("embed_piecewise: jump takes the lower limit") {
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {2});
    TaylorBasis b(1, 1);
    PiecewisePoly U(p, 1, 1, {taylor_poly(b, JetPoint{{0.25}, {0.0, 0.0}}), taylor_poly(b, JetPoint{{0.75}, {1.0, 0.0}})});
    Lattice L = Lattice::uniform(p.bounds(), {5});
    GridFn w = embed_piecewise(U, L)[0];
    CHECK(w[2] == ExtReal(0.0));
    CHECK(w[3] == ExtReal(1.0));
    CHECK(embed_piecewise(U, L, Exec::Serial)[0] == w);
}
