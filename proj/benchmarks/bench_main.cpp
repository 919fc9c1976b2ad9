#include <benchmark/benchmark.h>

#include "quadforge/catalog.hpp"
#include "quadforge/certificate.hpp"
#include "quadforge/emap_io.hpp"
#include "quadforge/planner.hpp"
#include "quadforge/search.hpp"
#include "quadforge/surgery.hpp"

using namespace quadforge;

namespace {

Catalog& catalog() {
    static Catalog c(QUADFORGE_BENCH_CATALOG, false);
    return c;
}

Embedding large() {
    Planner p(catalog());
    return p.generate({29, 24, SurfaceKind::Orientable}).embedding;
}

void BM_Certify(benchmark::State& state) {
    const auto e = large();
    for (auto _ : state) benchmark::DoNotOptimize(certify(e));
}
BENCHMARK(BM_Certify);

void BM_EmapRoundTrip(benchmark::State& state) {
    const auto text = write_emap(large());
    for (auto _ : state) benchmark::DoNotOptimize(write_emap(parse_emap(text)));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_EmapRoundTrip);

void BM_DiamondSum(benchmark::State& state) {
    const auto a = catalog().get_witness("phi_11_8_plus_star");
    const auto b = catalog().build_kmn(10, 12);
    for (auto _ : state) benchmark::DoNotOptimize(diamond_sum(a, 9, b, 10));
}
BENCHMARK(BM_DiamondSum);

void BM_Generate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ParamRequest req{n, 1, SurfaceKind::Nonorientable};
    for (auto _ : state) {
        Planner p(catalog());
        benchmark::DoNotOptimize(p.generate(req));
    }
}
BENCHMARK(BM_Generate)->Arg(10)->Arg(18)->Arg(26)->Unit(benchmark::kMillisecond);

void BM_ExactSearch(benchmark::State& state) {
    const std::vector<std::string> names{"K_6_3", "phi_8_4_star", "phi_10_1_star", "phi_11_8_plus_star"};
    const auto& rec = find_record(names.at(static_cast<std::size_t>(state.range(0))));
    state.SetLabel(rec.name);
    for (auto _ : state) benchmark::DoNotOptimize(search_exact(rec.specs.front()));
}
BENCHMARK(BM_ExactSearch)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_HandleSites(benchmark::State& state) {
    const auto e = catalog().get_witness("phi_11_8_plus_star");
    for (auto _ : state) benchmark::DoNotOptimize(find_handle_sites(e, {1, 2, 3, 4}));
}
BENCHMARK(BM_HandleSites);

void BM_GraphEnumeration(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::size_t total = 0;
        for (int m = n - 1; m <= n * (n - 1) / 2; ++m) total += for_each_graph(n, m, 1, [](const Graph&) { return true; });
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_GraphEnumeration)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
