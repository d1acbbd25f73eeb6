#include "ocm/pipeline.hpp"

#include "ocm/approx.hpp"
#include "ocm/config.hpp"
#include "ocm/errors.hpp"
#include "ocm/ext_real.hpp"
#include "ocm/filter_suite.hpp"
#include "ocm/order.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ocm {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Doubles as shortest round-trip strings so reports do not depend on the JSON
// library's float formatting.
std::string num(double v) { return to_string(ExtReal(v)); }

ordered_json config_echo(const ProblemConfig& c) {
    ordered_json j;
    std::vector<std::string> lo, hi;
    for (double v : c.lower) lo.push_back(num(v));
    for (double v : c.upper) hi.push_back(num(v));
    j["domain"] = {{"lower", lo}, {"upper", hi}, {"cells", c.cells}};
    std::vector<std::string> eqs, rhs;
    for (const auto& e : c.equations) eqs.push_back(e.text);
    for (const auto& e : c.rhs) rhs.push_back(e.text);
    j["system"] = {{"n", c.n}, {"K", c.K}, {"m", c.m}, {"equations", eqs}, {"rhs", rhs}};
    j["solve"] = {{"epsilon", num(c.epsilon)}, {"refine_steps", c.refine_steps},
                  {"samples_per_cell", c.samples_per_cell}, {"margin", num(c.margin)},
                  {"seed", c.seed},           {"eta", num(c.eta)},
                  {"lattice", c.lattice}};
    return j;
}

ordered_json certificate_json(const ResidualCertificate& cert) {
    ordered_json j;
    j["eps"] = num(cert.eps);
    j["eta"] = num(cert.eta);
    j["pass"] = cert.pass;
    j["insufficient"] = cert.insufficient;
    j["components"] = ordered_json::array();
    for (std::size_t i = 0; i < cert.components.size(); ++i) {
        const auto& c = cert.components[i];
        j["components"].push_back({{"component", i + 1},
                                   {"samples", c.samples},
                                   {"min_residual", num(c.min_residual)},
                                   {"max_residual", num(c.max_residual)},
                                   {"pass", c.pass}});
    }
    j["worst"] = ordered_json::array();
    for (const auto& o : cert.worst) {
        std::vector<std::string> x;
        for (double v : o.x) x.push_back(num(v));
        j["worst"].push_back({{"component", o.component + 1}, {"subcell", o.subcell}, {"x", x}, {"residual", num(o.residual)}});
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

// Shared driver: loads the config, runs body, maps failures to exit codes and
// always leaves a report.json behind.
template <class Body>
int drive(const char* command, const fs::path& config, const fs::path& out, std::ostream& log, Body&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    ordered_json report;
    report["command"] = command;
    report["config"] = config.string();
    int code = kExitOk;
    std::string message;
    try {
        ProblemConfig cfg = load_config(config);
        report["problem"] = config_echo(cfg);
        Problem problem = build_problem(cfg);
        fs::create_directories(out);
        code = body(cfg, problem, report);
        message = code == kExitOk ? "pass" : "certificate or monotonicity check failed";
    } catch (const ConfigError& e) {
        code = kExitConfig;
        message = std::string("config error: ") + e.what();
    } catch (const ParseError& e) {
        code = kExitConfig;
        message = std::string("expression error at ") + e.what();
    } catch (const RangeViolation& e) {
        code = kExitRange;
        message = std::string("range violation: ") + e.what();
    } catch (const DeltaCollapse& e) {
        code = kExitDeltaCollapse;
        message = std::string("delta collapse: ") + e.what();
    } catch (const EvalUndefined& e) {
        code = kExitConfig;
        message = std::string("evaluation undefined: ") + e.what();
    } catch (const std::invalid_argument& e) {
        code = kExitConfig;
        message = std::string("invalid problem: ") + e.what();
    }
    report["exit_code"] = code;
    report["verdict"] = code == kExitOk ? "pass" : "fail";
    report["message"] = message;
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << command << ": " << message << " (exit " << code << ")\n";
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec) {
        std::ofstream f(out / "report.json", std::ios::binary);
        if (f) f << report.dump(2) << '\n';
    }
    return code;
}

ApproxOptions approx_options(const ProblemConfig& cfg) {
    ApproxOptions o;
    o.eta = cfg.eta;
    o.samples_per_cell = cfg.samples_per_cell;
    o.margin = cfg.margin;
    o.seed = cfg.seed;
    o.exec = Exec::Parallel;
    return o;
}

} // namespace

int run_solve(const fs::path& config, const fs::path& out, std::ostream& log, const RunHooks&) {
    return drive("solve", config, out, log, [&](const ProblemConfig& cfg, const Problem& p, ordered_json& report) {
        GlobalApprox g = global_approx(p.system, p.rhs, p.partition, cfg.epsilon, approx_options(cfg));
        std::ostringstream csv;
        write_certificate_csv(csv, g.cert);
        write_text(out / "certificate.csv", csv.str());
        report["subcells"] = g.U.size();
        report["certificate"] = certificate_json(g.cert);
        for (std::size_t i = 0; i < g.cert.components.size(); ++i) {
            const auto& c = g.cert.components[i];
            log << "  u" << (i + 1) << ": samples " << c.samples << ", residual in [" << num(c.min_residual) << ", "
                << num(c.max_residual) << "], band [" << num(-cfg.epsilon) << ", 0] " << (c.pass ? "ok" : "FAIL") << '\n';
        }
        return g.cert.pass ? kExitOk : kExitCertificate;
    });
}

int run_refine(const fs::path& config, const fs::path& out, std::ostream& log, const RunHooks& hooks) {
    return drive("refine", config, out, log, [&](const ProblemConfig& cfg, const Problem& p, ordered_json& report) {
        RefineOptions ro;
        ro.approx = approx_options(cfg);
        if (hooks.inject_nonmonotone)
            ro.hook = [](std::size_t n, std::vector<GridFn>& image) {
                if (n != 2) return;
                for (auto& g : image) {
                    std::vector<ExtReal> v = g.values();
                    for (auto& x : v) x = ExtReal(x.value() - 0.5);
                    g = g.with_values(std::move(v));
                }
            };
        SolutionTrace trace = refine_solution(p.system, p.rhs, p.partition, cfg.refine_steps, p.lattice, ro);
        std::ostringstream csv;
        write_trace_csv(csv, trace);
        write_text(out / "trace.csv", csv.str());
        for (std::size_t k = 0; k < trace.envelope.size(); ++k) {
            std::ostringstream e;
            write_csv(e, trace.envelope[k].lower);
            write_text(out / ("envelope_u" + std::to_string(k + 1) + ".csv"), e.str());
        }
        bool certified = true;
        report["steps"] = ordered_json::array();
        for (const auto& s : trace.steps) {
            certified = certified && s.cert.pass;
            report["steps"].push_back({{"n", s.n},
                                       {"eps", num(s.eps)},
                                       {"subcells", s.V.size()},
                                       {"gap", num(s.gap)},
                                       {"repairs", s.repairs},
                                       {"certificate", certificate_json(s.cert)}});
            log << "  n=" << s.n << " eps=" << num(s.eps) << " gap=" << num(s.gap) << " repairs=" << s.repairs
                << (s.cert.pass ? "" : " certificate FAIL") << '\n';
        }
        report["repairs"] = trace.repairs;
        report["repair_bound"] = 0;
        report["upper_envelope"] = "f (right-hand side); no upper approximant in solution space";
        return certified && trace.repairs == 0 ? kExitOk : kExitCertificate;
    });
}

int run_selfcheck(std::ostream& log, const std::optional<fs::path>& out, const RunHooks& hooks) {
    filters::SuiteOptions opts;
    opts.drop_axiom = hooks.drop_axiom;
    opts.no_instances = hooks.no_instances;
    filters::SuiteResult r = filters::run_filter_suite(opts);

    char line[160];
    std::snprintf(line, sizeof line, "%-24s %-6s %10s %9s  %s\n", "check", "axiom", "instances", "failures", "status");
    log << line;
    for (const auto& s : r.summary()) {
        std::string axiom = s.axiom ? "(" + std::to_string(s.axiom) + ")" : "-";
        std::snprintf(line, sizeof line, "%-24s %-6s %10zu %9zu  %s\n", s.check.c_str(), axiom.c_str(), s.instances,
                      s.failures, s.failures ? "FAIL" : "pass");
        log << line;
    }
    for (const auto& row : r.rows)
        if (!row.pass()) {
            log << "first failure: " << row.check << " axiom (" << row.axiom << ") on " << row.instance
                << ": oracle " << (row.expected ? "holds" : "fails") << ", checker says "
                << (row.got ? "holds" : "fails") << '\n';
            break;
        }
    if (r.insufficient) log << "insufficient: no instances checked (vacuous pass)\n";
    if (out) {
        fs::create_directories(*out);
        std::ostringstream csv;
        filters::write_suite_csv(csv, r);
        write_text(*out / "selfcheck.csv", csv.str());
    }
    log << "selfcheck: " << (r.pass() ? "pass" : "fail") << '\n';
    return r.pass() ? kExitOk : kExitCertificate;
}

} // namespace ocm
