#include "doctest.h"

#include "ocm/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace ocm;
namespace fs = std::filesystem;

namespace {

fs::path config(const std::string& name) { return fs::path(OCM_CONFIG_DIR) / name; }

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("ocm_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("solve: exit codes") {
    std::ostringstream log;
    CHECK(run_solve(config("transport.cfg"), scratch("t"), log) == kExitOk);
    CHECK(run_solve(config("squared_gradient.cfg"), scratch("sq"), log) == kExitOk);
    CHECK(run_solve(config("range_squared.cfg"), scratch("r1"), log) == kExitRange);
    CHECK(run_solve(config("range_sine.cfg"), scratch("r2"), log) == kExitRange);
    std::ostringstream err;
    CHECK(run_solve(config("malformed.cfg"), scratch("m"), err) == kExitConfig);
    CHECK(err.str().find("line") != std::string::npos);
    CHECK(run_solve(config("missing.cfg"), scratch("x"), err) == kExitConfig);
}

TEST_CASE("solve: certificate and report files") {
    std::ostringstream log;
    const fs::path out = scratch("files");
    REQUIRE(run_solve(config("transport.cfg"), out, log) == kExitOk);
    const std::string cert = slurp(out / "certificate.csv");
    CHECK(cert.rfind("component,samples,min_residual,max_residual,eps,eta,pass\n", 0) == 0);
    CHECK(cert.find(",true") != std::string::npos);
    CHECK(fs::exists(out / "report.json"));
}

TEST_CASE("refine: rows, hooks and exit codes") {
    std::ostringstream log;
    const fs::path out = scratch("refine");
    REQUIRE(run_refine(config("zero.cfg"), out, log) == kExitOk);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "envelope_u1.csv"));

    RunHooks inject;
    inject.inject_nonmonotone = true;
    const fs::path bad = scratch("inject");
    CHECK(run_refine(config("zero.cfg"), bad, log, inject) == kExitCertificate);
    CHECK(slurp(bad / "report.json").find("repairs") != std::string::npos);
}

TEST_CASE("selfcheck: stock, dropped axiom, empty suite") {
    std::ostringstream log;
    CHECK(run_selfcheck(log) == kExitOk);
    RunHooks drop;
    drop.drop_axiom = 4;
    std::ostringstream dlog;
    CHECK(run_selfcheck(dlog, std::nullopt, drop) == kExitCertificate);
    CHECK(dlog.str().find("(4)") != std::string::npos);
    RunHooks none;
    none.no_instances = true;
    std::ostringstream nlog;
    CHECK(run_selfcheck(nlog, std::nullopt, none) == kExitOk);
    CHECK(nlog.str().find("insufficient") != std::string::npos);
}
