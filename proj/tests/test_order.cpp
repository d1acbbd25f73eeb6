#include "doctest.h"

#include "ocm/order.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace ocm;

namespace {

Lattice unit_line(std::size_t nodes) { return Lattice::uniform(Box::make({0.0}, {1.0}), {nodes}); }

GridFn constant(const Lattice& L, double c) { return GridFn::constant(L, ExtReal(c)); }

PiecewisePoly slope(double s) {
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {1});
    TaylorBasis b(1, 1);
    return PiecewisePoly(p, 1, 1, {taylor_poly(b, JetPoint{{0.5}, {0.0, s}})});
}

} // namespace

TEST_CASE("le_mod_nd ignores the skeleton") {
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {4});
    Skeleton gamma = skeleton_of(p);
    Lattice L = unit_line(9);
    GridFn f = GridFn::sample(L, [](std::span<const double> x) { return x[0]; });
    GridFn g = f;
    for (std::size_t i : {0u, 2u, 4u, 6u, 8u}) g[i] = ExtReal(f[i].value() + (i % 4 ? 10.0 : -10.0));
    CHECK(le_mod_nd(f, g, gamma));
    CHECK(le_mod_nd(g, f, gamma));

    GridFn h = GridFn::sample(L, [](std::span<const double> x) { return x[0] + 1; });
    CHECK(le_mod_nd(f, h, gamma));
    CHECK_FALSE(le_mod_nd(h, f, gamma));
    CHECK(le_mod_nd(f, f, gamma));
}

TEST_CASE("le_mod_nd needs a shared lattice") {
    Skeleton gamma = skeleton_of(build_partition(Box::make({0.0}, {1.0}), {1}));
    CHECK_THROWS(le_mod_nd(constant(unit_line(5), 0), constant(unit_line(6), 0), gamma));
}

TEST_CASE("pullback order of transport images") {
    PdeSystem sys = parse_system("D(u1,(1))", 1, 1, 1);
    Lattice L = unit_line(21);
    PiecewisePoly U = slope(0.4);
    PiecewisePoly V = slope(0.5);
    CHECK(pullback_le(sys, U, U, L));
    CHECK(pullback_le(sys, U, V, L));
    CHECK_FALSE(pullback_le(sys, V, U, L));
    // u and u + const share the image
    PiecewisePoly W = slope(0.4);
    W.piece(0).coeffs[0] = 3.0;
    CHECK(pullback_le(sys, U, W, L));
    CHECK(pullback_le(sys, W, U, L));
}

TEST_CASE("order convergence of an alternating sequence") {
    Lattice L = unit_line(5);
    const double c = 0.3;
    std::vector<GridFn> xs;
    OrderIntervalSeq w;
    for (int n = 1; n <= 400; ++n) {
        xs.push_back(constant(L, c + ((n % 2) ? -1.0 : 1.0) / n));
        w.lambda.push_back(constant(L, c - 1.0 / n));
        w.mu.push_back(constant(L, c + 1.0 / n));
    }
    CHECK(order_converges(xs, constant(L, c), w, 0.01));

    std::vector<GridFn> still(10, constant(L, c));
    OrderIntervalSeq tight{still, still};
    CHECK(order_converges(still, constant(L, c), tight, 0.0));

    std::vector<GridFn> flip;
    OrderIntervalSeq wide;
    for (int n = 1; n <= 50; ++n) {
        flip.push_back(constant(L, (n % 2) ? -1.0 : 1.0));
        wide.lambda.push_back(constant(L, -1.0));
        wide.mu.push_back(constant(L, 1.0));
    }
    CHECK_FALSE(order_converges(flip, constant(L, 0.0), wide, 0.01));
}

TEST_CASE("nested interval validity") {
    Lattice L = unit_line(5);
    std::vector<Box> boxes{Box::make({0.0}, {0.5}), Box::make({0.5}, {1.0})};
    OrderIntervalSeq shrink;
    for (int n = 1; n <= 200; ++n) {
        shrink.lambda.push_back(constant(L, 2.0 - 1.0 / n));
        shrink.mu.push_back(constant(L, 2.0 + 1.0 / n));
    }
    CHECK(nested_interval_valid(shrink, boxes, 0.01));

    OrderIntervalSeq fixed{std::vector<GridFn>(20, constant(L, 0.0)), std::vector<GridFn>(20, constant(L, 1.0))};
    CHECK_FALSE(nested_interval_valid(fixed, boxes, 0.01));

    OrderIntervalSeq broken = shrink;
    broken.lambda[1][2] = ExtReal(0.0);
    CHECK_FALSE(nested_interval_valid(broken, boxes, 0.01));
}

TEST_CASE("refine: transport, ten steps") {
    PdeSystem sys = parse_system("D(u1,(1))", 1, 1, 1);
    Rhs f = Rhs::parse({"x1"}, 1);
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {1});
    Lattice L = unit_line(201);
    SolutionTrace t = refine_solution(sys, f, p, 10, L);
    REQUIRE(t.size() == 10);
    CHECK(t.repairs == 0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        CAPTURE(k);
        CHECK(t.steps[k].n == k + 1);
        CHECK(t.steps[k].eps == 1.0 / n);
        CHECK(t.steps[k].cert.pass);
        CHECK(t.steps[k].gap <= 1.0 / n + 1e-9);
        if (k > 0) {
            Skeleton none = skeleton_of(build_partition(Box::make({5.0}, {6.0}), {1}));
            CHECK(le_mod_nd(t.steps[k - 1].image[0], t.steps[k].image[0], none));
        }
    }
    CHECK(cauchy_gap(t, 4, 4)[0] == 0.0);
    CHECK(cauchy_gap(t, 5, 10)[0] <= 1.0 / 5 + 2e-9);
    CHECK_THROWS_AS(cauchy_gap(t, 0, 3), std::out_of_range);
    CHECK_THROWS_AS(cauchy_gap(t, 2, 11), std::out_of_range);

    OrderIntervalSeq seq;
    for (const auto& s : t.steps) {
        seq.lambda.push_back(s.image[0]);
        seq.mu.push_back(t.rhs[0]);
    }
    std::vector<Box> boxes{Box::make({0.0}, {0.3}), Box::make({0.3}, {1.0})};
    CHECK(nested_interval_valid(seq, boxes, 0.1 + 1e-9));
    REQUIRE(t.envelope.size() == 1);
    CHECK(t.envelope[0].valid(1e-9));
}

TEST_CASE("refine: identity operator closed form") {
    PdeSystem sys = parse_system("u1", 1, 1, 0);
    Rhs f = Rhs::parse({"0"}, 1);
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {2});
    Lattice L = unit_line(11);
    SolutionTrace t = refine_solution(sys, f, p, 6, L);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        CHECK(t.steps[k].gap == doctest::Approx(1.0 / (2 * n)).epsilon(1e-12));
        for (std::size_t i = 0; i < L.size(); ++i)
            CHECK(t.steps[k].image[0][i].value() == doctest::Approx(-1.0 / (2 * n)).epsilon(1e-12));
    }
    CHECK(cauchy_gap(t, 1, 2)[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.repairs == 0);
}

TEST_CASE("refine: one step equals a plain solve at eps = 1") {
    PdeSystem sys = parse_system("D(u1,(1))", 1, 1, 1);
    Rhs f = Rhs::parse({"x1"}, 1);
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {1});
    SolutionTrace t = refine_solution(sys, f, p, 1, unit_line(51));
    REQUIRE(t.size() == 1);
    GlobalApprox g = global_approx(sys, f, p, 1.0);
    CHECK(t.steps[0].V.size() == g.U.size());
    for (std::size_t s = 0; s < g.U.size(); ++s) CHECK(t.steps[0].V.piece(s).coeffs == g.U.piece(s).coeffs);
}

TEST_CASE("refine: a non-monotone step is repaired and counted") {
    PdeSystem sys = parse_system("D(u1,(1))", 1, 1, 1);
    Rhs f = Rhs::parse({"x1"}, 1);
    CellPartition p = build_partition(Box::make({0.0}, {1.0}), {1});
    RefineOptions opts;
    opts.hook = [](std::size_t n, std::vector<GridFn>& image) {
        if (n != 2) return;
        for (auto& g : image)
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = ExtReal(g[i].value() - 0.5);
    };
    SolutionTrace t = refine_solution(sys, f, p, 3, unit_line(51), opts);
    CHECK(t.repairs > 0);
    CHECK(t.steps[1].repairs > 0);
}

TEST_CASE("trace CSV layout") {
    PdeSystem sys = parse_system("D(u1,(1))", 1, 1, 1);
    Rhs f = Rhs::parse({"x1"}, 1);
    SolutionTrace t = refine_solution(sys, f, build_partition(Box::make({0.0}, {1.0}), {1}), 3, unit_line(21));
    std::ostringstream os;
    write_trace_csv(os, t);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,eps,max_residual,min_residual,gap,repairs");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
}
