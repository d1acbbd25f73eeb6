#include "ocm/approx.hpp"
#include "ocm/baire.hpp"
#include "ocm/parallel.hpp"
#include "ocm/piecewise.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace ocm;

namespace {

struct Fixture {
    PdeSystem sys = parse_system("D(u1,(1,0))^2 + D(u1,(0,1))", 2, 1, 1);
    Rhs f = Rhs::parse({"sin(x1) + x2^2"}, 2);
    CellPartition p = build_partition(Box::make({0.0, 0.0}, {1.0, 1.0}), {2, 2});
};

const Fixture& fixture() {
    static const Fixture fx;
    return fx;
}

const GlobalApprox& solved() {
    static const GlobalApprox g = global_approx(fixture().sys, fixture().f, fixture().p, 0.05);
    return g;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_GlobalApprox(benchmark::State& state) {
    ApproxOptions opts;
    opts.exec = exec_of(state);
    for (auto _ : state) {
        GlobalApprox g = global_approx(fixture().sys, fixture().f, fixture().p, 0.02, opts);
        benchmark::DoNotOptimize(g.U.size());
    }
}

void BM_CheckResidual(benchmark::State& state) {
    const GlobalApprox& g = solved();
    const auto pts = sample_points(g.U.partition(), 20, 0.05, 1);
    for (auto _ : state) {
        auto cert = check_residual(fixture().sys, g.U, fixture().f, 0.05, pts, 1e-9, std::nullopt, exec_of(state));
        benchmark::DoNotOptimize(cert.pass);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_EmbedImage(benchmark::State& state) {
    const GlobalApprox& g = solved();
    Lattice L = Lattice::uniform(fixture().p.bounds(), {201, 201});
    for (auto _ : state) {
        auto img = embed_image(fixture().sys, g.U, L, exec_of(state));
        benchmark::DoNotOptimize(img.size());
    }
}

void BM_NormalizeNls(benchmark::State& state) {
    Lattice L = Lattice::uniform(Box::make({0.0, 0.0}, {1.0, 1.0}), {401, 401});
    GridFn f = GridFn::sample(L, [](std::span<const double> x) { return std::sin(9 * x[0]) * x[1]; });
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto idx = L.multi_index(i);
        f.set_codim(i, static_cast<std::uint8_t>((idx[0] % 20 == 0) + (idx[1] % 20 == 0)));
    }
    for (auto _ : state) {
        GridFn g = normalize_nls(f, exec_of(state));
        benchmark::DoNotOptimize(g.size());
    }
}

} // namespace

BENCHMARK(BM_GlobalApprox)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckResidual)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmbedImage)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormalizeNls)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
