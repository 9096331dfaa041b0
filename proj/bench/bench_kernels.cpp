// Serial reference path against the OpenMP path for the two hot kernels.
// Set NBLAB_THREADS to control the worker count.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nblab/kernels.hpp"
#include "nblab/quadrature.hpp"
#include "nblab/special_functions.hpp"

using namespace nblab;

namespace {

Execution mode(const benchmark::State& state) { return state.range(1) ? Execution::parallel : Execution::serial; }

void BM_ZetaNodes(benchmark::State& state) {
    const QuadratureRule rule = composite_gauss_legendre(-200.0, 200.0, static_cast<int>(state.range(0)), 16);
    const std::function<Complex(double)> f = [](double t) { return zeta(Complex(0.5, t)); };
    for (auto _ : state) {
        auto v = evaluate_nodes<Complex, double>(rule.nodes, f, mode(state));
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rule.nodes.size()));
}
BENCHMARK(BM_ZetaNodes)->ArgsProduct({{50, 400}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AccumulateGram(benchmark::State& state) {
    const std::size_t nodes = 6400;
    const auto dim = static_cast<std::size_t>(state.range(0));
    std::vector<Complex> basis(nodes * dim);
    std::vector<double> weights(nodes, 1.0 / nodes);
    for (std::size_t j = 0; j < nodes; ++j)
        for (std::size_t n = 0; n < dim; ++n) basis[j * dim + n] = std::polar(1.0 / (1.0 + n), 0.01 * j * (n + 1));
    for (auto _ : state) {
        auto g = accumulate_gram(basis, weights, dim, 1.0, mode(state));
        benchmark::DoNotOptimize(g.data());
    }
}
BENCHMARK(BM_AccumulateGram)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

int main(int argc, char** argv) {
    configure_threads_from_env();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
}
