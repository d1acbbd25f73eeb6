#include "ocm/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Order completion method: piecewise approximate solutions of nonlinear PDE systems"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    ocm::RunHooks hooks;

    auto* solve = app.add_subcommand("solve", "Approximate solution with a residual certificate");
    solve->add_option("config", config, "Problem file")->required()->check(CLI::ExistingFile);
    solve->add_option("--out", out, "Output directory")->required();

    auto* refine = app.add_subcommand("refine", "Refinement sequence eps = 1/n with trace and envelope");
    refine->add_option("config", config, "Problem file")->required()->check(CLI::ExistingFile);
    refine->add_option("--out", out, "Output directory")->required();
    refine->add_flag("--inject-nonmonotone", hooks.inject_nonmonotone)->group("");

    auto* selfcheck = app.add_subcommand("selfcheck", "Check the finite filter axioms against brute force");
    selfcheck->add_option("--out", out, "Directory for selfcheck.csv");
    selfcheck->add_option("--drop-axiom", hooks.drop_axiom)->group("");
    selfcheck->add_flag("--no-instances", hooks.no_instances)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : ocm::kExitConfig;
    }

    if (*solve) return ocm::run_solve(config, out, std::cout, hooks);
    if (*refine) return ocm::run_refine(config, out, std::cout, hooks);
    return ocm::run_selfcheck(std::cout, out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out), hooks);
}
