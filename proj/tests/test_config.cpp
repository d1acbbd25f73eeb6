#include "doctest.h"

#include "ocm/config.hpp"
#include "ocm/errors.hpp"

#include <string>

using namespace ocm;

namespace {

const char* kGood = R"(# comment
[domain]
lower = [0, -1]
upper = [1, 1]
cells = [2, 3]

[system]
n = 2
K = 1
m = 1
equations = ["D(u1,(1,0)) + u1"]   # trailing comment
rhs = ["x1 * x2"]

[solve]
epsilon = 0.05
refine_steps = 4
seed = 7
)";

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("config: full example") {
    ProblemConfig cfg = parse_config(kGood);
    CHECK(cfg.lower == Point{0.0, -1.0});
    CHECK(cfg.upper == Point{1.0, 1.0});
    CHECK(cfg.cells == std::vector<std::size_t>{2, 3});
    CHECK(cfg.n == 2);
    CHECK(cfg.K == 1);
    CHECK(cfg.m == 1);
    REQUIRE(cfg.equations.size() == 1);
    CHECK(cfg.equations[0].text == "D(u1,(1,0)) + u1");
    CHECK(cfg.equations[0].line == 11);
    CHECK(cfg.epsilon == 0.05);
    CHECK(cfg.refine_steps == 4);
    CHECK(cfg.seed == 7);
    CHECK(cfg.samples_per_cell == 8);
    CHECK(cfg.margin == 0.05);
    CHECK(cfg.lattice == std::vector<std::size_t>{41, 41});

    Problem p = build_problem(cfg);
    CHECK(p.partition.cell_count() == 6);
    CHECK(p.system.M() == 3);
    CHECK(p.lattice.size() == 41 * 41);
}

TEST_CASE("config: errors point at the offending line") {
    std::string text = kGood;
    CHECK(error_line(std::string(text).replace(text.find("epsilon = 0.05"), 14, "epsilon = -1")) == 15);
    CHECK(error_line(std::string(text).replace(text.find("cells = [2, 3]"), 14, "cells = [2, 3")) == 5);
    CHECK(error_line(std::string(text).replace(text.find("seed = 7"), 8, "sed = 7")) == 17);
    CHECK(error_line(std::string(text).replace(text.find("[solve]"), 7, "[solver]")) == 14);
    CHECK(error_line(std::string(text).replace(text.find("K = 1"), 5, "K = 2")) > 0);
    CHECK_THROWS_AS(parse_config("[domain]\nlower = [0]\nupper = [1]\n"), ConfigError);
}

TEST_CASE("config: expression errors are located in the file") {
    std::string text = kGood;
    text.replace(text.find("D(u1,(1,0)) + u1"), 16, "D(u1,(1,0)) + u2");
    ProblemConfig cfg = parse_config(text);
    try {
        build_problem(cfg);
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 11);
        // column of u2 inside the quoted string
        CHECK(e.column() == std::string("equations = [\"D(u1,(1,0)) + ").size() + 1);
    }
}

TEST_CASE("config: degenerate domain") {
    std::string text = kGood;
    text.replace(text.find("upper = [1, 1]"), 14, "upper = [1, -2]");
    CHECK_THROWS(build_problem(parse_config(text)));
}
