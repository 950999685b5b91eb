#include <benchmark/benchmark.h>

#include "detsgrad/graph.hpp"
#include "detsgrad/mlp.hpp"
#include "detsgrad/sim.hpp"

namespace {

using namespace detsgrad;

void BM_SpectralQuantities(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    const auto g = GraphTopology::from_edges(edges, n);
    for (auto _ : state) {
        auto sq = spectral_quantities(g.laplacian());
        benchmark::DoNotOptimize(sq);
    }
}
BENCHMARK(BM_SpectralQuantities)->Arg(10)->Arg(64)->Arg(256);

void BM_MlpGradient(benchmark::State& state) {
    const long batch = state.range(0);
    const auto model = make_mlp_classifier({784, 64, 32, 10}, Activation::relu);
    RngStream rng(1, 0, RngStream::Tag::test);
    const Eigen::VectorXd w = model->init_params(rng);
    Eigen::MatrixXd X(784, batch);
    std::vector<int> y(batch);
    for (long c = 0; c < batch; ++c) {
        y[c] = static_cast<int>(rng.uniform_below(10));
        for (int r = 0; r < 784; ++r) X(r, c) = rng.uniform01();
    }
    Eigen::VectorXd grad;
    for (auto _ : state) {
        const double loss = model->loss_and_grad(w, X, y, &grad);
        benchmark::DoNotOptimize(loss);
        benchmark::DoNotOptimize(grad);
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpGradient)->Arg(1)->Arg(8)->Arg(64);

void BM_QuarticRound(benchmark::State& state) {
    SimConfig config;
    config.topology = {.kind = TopologySpec::Kind::ring, .n = 10};
    config.schedule = {.a = 0.1, .b = 0.2525, .delta1 = 0.1, .delta2 = 1.0, .epsilon_scale = 1.0};
    config.problem.kind = ProblemSpec::Kind::synthetic;
    config.problem.synthetic = {.name = "quartic-saddle", .dim = 16, .samples_per_agent = 64,
                                .noise_scale = 0.5};
    config.upsilon0 = Upsilon0Spec::per_parameter(0.2);
    config.max_iterations = 1000;
    config.metric_cadence = 1000;
    config.threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto result = run(config);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * config.max_iterations);
}
BENCHMARK(BM_QuarticRound)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
