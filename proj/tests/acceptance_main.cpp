// Acceptance suite: executes every gate criterion end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.
//
// Usage: detsgrad_acceptance [criterion numbers...]
//
// Criterion 8/9 train on the built-in generated digit set by default; point
// DETSGRAD_MNIST_DIR at a directory with the standard IDX files
// (train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-images-idx3-ubyte,
// t10k-labels-idx1-ubyte) to run them on the real corpus instead.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "detsgrad/analysis.hpp"
#include "detsgrad/metrics.hpp"
#include "detsgrad/sim.hpp"
#include "support/finite_diff.hpp"
#include "support/jacobi_eigen.hpp"
#include "support/mini_network.hpp"
#include "support/stacked_oracle.hpp"

using namespace detsgrad;
namespace an = detsgrad::analysis;

namespace {

int worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 10u));
}

// Fails the criterion with a formatted message.
#define ACC_REQUIRE(cond, msg)                                   \
    do {                                                         \
        if (!(cond)) {                                           \
            std::ostringstream os_;                              \
            os_ << msg;                                          \
            return os_.str();                                    \
        }                                                        \
    } while (0)

SimConfig quartic_base(long iterations, std::uint64_t seed, double epsilon_scale) {
    SimConfig config;
    config.topology = {.kind = TopologySpec::Kind::ring, .n = 10};
    config.schedule = {.a = 0.1, .b = 0.2525, .delta1 = 0.1, .delta2 = 1.0,
                       .epsilon_scale = epsilon_scale};
    config.problem.kind = ProblemSpec::Kind::synthetic;
    config.problem.synthetic = {.name = "quartic-saddle", .dim = 16, .samples_per_agent = 64,
                                .noise_scale = 0.5};
    config.direction = GradientDirection::single();
    config.upsilon0 = Upsilon0Spec::per_parameter(0.2);
    config.algorithm = Algorithm::detsgrad;
    config.max_iterations = iterations;
    config.master_seed = seed;
    config.metric_cadence = 100;
    config.threads = worker_threads();
    return config;
}

std::string csv_bytes(const RunMetrics& metrics) {
    std::ostringstream os;
    write_metrics_csv(metrics, os);
    return os.str();
}

// ---------------------------------------------------------------- criteria

// Trigger soundness: the post-exchange deviation respects the threshold at
// every iteration past warm-up, for every agent, over 10 seeds.
std::string criterion_trigger_soundness() {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto config = quartic_base(20000, seed, 1e-5);
        const auto result = run(config);
        ACC_REQUIRE(result.metrics.trigger_violations == 0,
                    "seed " << seed << ": " << result.metrics.trigger_violations
                            << " violations (max ratio " << result.metrics.max_trigger_ratio
                            << ")");
        ACC_REQUIRE(result.metrics.max_trigger_ratio < 1.0,
                    "seed " << seed << ": max ratio " << result.metrics.max_trigger_ratio);
    }
    return "";
}

// upsilon0 = 0 equals the continuous-broadcast baseline bit for bit.
std::string criterion_upsilon0_equivalence() {
    auto config = quartic_base(10000, 42, 1e-5);
    config.upsilon0 = Upsilon0Spec::absolute(0.0);
    const auto triggered = run(config);
    config.algorithm = Algorithm::dist_sgd_continuous;
    const auto continuous = run(config);

    ACC_REQUIRE(csv_bytes(triggered.metrics) == csv_bytes(continuous.metrics),
                "metric trajectories differ");
    for (std::size_t i = 0; i < triggered.final_params.size(); ++i)
        ACC_REQUIRE(triggered.final_params[i] == continuous.final_params[i],
                    "final parameters differ at agent " << i);
    return "";
}

// Per-agent updates match the stacked matrix recursion on random graphs.
std::string criterion_stacked_oracle() {
    RngStream rng(4242, 0, RngStream::Tag::test);
    const int d = 5;
    for (int graph_trial = 0; graph_trial < 20; ++graph_trial) {
        const int n = 4 + static_cast<int>(rng.uniform_below(9));  // 4..12
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
        for (int extra = 0; extra < n; ++extra) {
            const int i = static_cast<int>(rng.uniform_below(n));
            const int j = static_cast<int>(rng.uniform_below(n));
            bool dup = i == j;
            for (const auto& [a, b] : edges)
                dup = dup || (a == std::min(i, j) && b == std::max(i, j));
            if (!dup) edges.emplace_back(std::min(i, j), std::max(i, j));
        }
        auto topology = GraphTopology::from_edges(edges, n);
        StepSchedule schedule{.a = 0.05, .b = 0.8 / topology.sigma_max(), .delta1 = 0.1,
                              .delta2 = 1.0, .epsilon_scale = 1.0};
        const double upsilon0 = graph_trial % 5 == 0 ? 0.0 : rng.uniform(0.05, 0.5) * d;

        Eigen::VectorXd w0(n * d);
        for (int i = 0; i < n * d; ++i) w0[i] = rng.normal(0.0, 0.5);

        testsupport::MiniNetwork per_agent(topology, schedule, upsilon0, w0);
        testsupport::StackedRecursion stacked(topology, schedule, upsilon0, w0);

        for (long k = 0; k < 100; ++k) {
            std::vector<Eigen::VectorXd> grads(n);
            Eigen::VectorXd stacked_g(n * d);
            for (int i = 0; i < n; ++i) {
                grads[i].resize(d);
                for (int c = 0; c < d; ++c) grads[i][c] = rng.normal();
                stacked_g.segment(i * d, d) = grads[i];
            }
            per_agent.round(k, grads);
            stacked.step(k, stacked_g);
            const double dev = (per_agent.stacked() - stacked.stacked()).cwiseAbs().maxCoeff();
            ACC_REQUIRE(dev <= 1e-12, "graph " << graph_trial << " round " << k
                                               << ": max abs deviation " << dev);
        }
    }
    return "";
}

// Consensus decay rate: log-log slope of the 10-seed mean consensus error
// over the final decade of a 100k-iteration run.
std::string criterion_consensus_decay() {
    const long iters = 100000;
    std::vector<an::SeriesPoint> mean;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto result = run(quartic_base(iters, seed, 1.0));
        const auto& rows = result.metrics.rows;
        if (mean.empty()) {
            mean.resize(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) mean[r].k = rows[r].k;
        }
        for (std::size_t r = 0; r < rows.size(); ++r)
            mean[r].value += rows[r].consensus_error / 10.0;
    }
    const auto fit = an::fit_decay_rate(mean, iters / 10, iters);
    ACC_REQUIRE(fit.slope <= -0.85,
                "slope " << fit.slope << " > -0.85 (r^2 " << fit.r_squared << ")");
    return "";
}

// Analytic gradients vs central finite differences, 200 random points each.
std::string criterion_gradient_correctness() {
    RngStream rng(777, 0, RngStream::Tag::test);

    for (const char* name : {"quartic-saddle", "rastrigin-sum", "nonconvex-regression"}) {
        const auto oracles = make_synthetic({.name = name, .dim = 6}, 4, 2025);
        for (int point = 0; point < 200; ++point) {
            const auto& oracle = *oracles[point % oracles.size()];
            Eigen::VectorXd w(6);
            for (int i = 0; i < 6; ++i) w[i] = rng.normal(0.0, 0.8);
            std::vector<long> batch(oracle.shard_size());
            std::iota(batch.begin(), batch.end(), 0L);
            const Eigen::VectorXd fd = testsupport::central_difference(
                [&](const Eigen::VectorXd& x) { return oracle.loss_at(x, batch); }, w);
            const Eigen::VectorXd g = oracle.full_gradient(w);
            const double rel =
                (g - fd).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff());
            ACC_REQUIRE(rel < 1e-6, name << " point " << point << ": relative error " << rel);
        }
    }

    const auto model = make_mlp_classifier({12, 8, 6, 4}, Activation::tanh);
    for (int point = 0; point < 200; ++point) {
        Eigen::VectorXd w = model->init_params(rng);
        Eigen::MatrixXd X(12, 3);
        std::vector<int> y(3);
        for (int c = 0; c < 3; ++c) {
            y[c] = static_cast<int>(rng.uniform_below(4));
            for (int r = 0; r < 12; ++r) X(r, c) = rng.uniform01();
        }
        Eigen::VectorXd g;
        model->loss_and_grad(w, X, y, &g);
        const Eigen::VectorXd fd = testsupport::central_difference(
            [&](const Eigen::VectorXd& x) { return model->loss(x, X, y); }, w, 1e-6);
        const double rel = (g - fd).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff());
        ACC_REQUIRE(rel < 1e-7, "mlp point " << point << ": relative error " << rel);
    }
    return "";
}

// Ring spectra: lambda2 = 2(1 - cos(2 pi / n)); sigma_max is the maximum of
// the ring eigenvalue family 2(1 - cos(2 pi j / n)), i.e. 4 for even n and
// 2(1 - cos((n-1) pi / n)) for odd n. Cross-checked against an independent
// Jacobi eigensolver.
std::string criterion_spectral_correctness() {
    using std::numbers::pi;
    for (int n = 3; n <= 50; ++n) {
        const auto g = GraphTopology::ring(n);
        const double lambda2_closed = 2.0 - 2.0 * std::cos(2.0 * pi / n);
        const double sigma_closed =
            n % 2 == 0 ? 4.0 : 2.0 - 2.0 * std::cos((n - 1) * pi / n);
        ACC_REQUIRE(std::abs(g.lambda2() - lambda2_closed) < 1e-10,
                    "ring(" << n << ") lambda2 " << g.lambda2() << " vs " << lambda2_closed);
        ACC_REQUIRE(std::abs(g.sigma_max() - sigma_closed) < 1e-10,
                    "ring(" << n << ") sigma_max " << g.sigma_max() << " vs " << sigma_closed);

        const auto ev = testsupport::jacobi_eigenvalues(g.laplacian());
        ACC_REQUIRE(std::abs(g.lambda2() - ev[1]) < 1e-10, "ring(" << n << ") eigensolver lambda2");
        ACC_REQUIRE(std::abs(g.sigma_max() - ev.back()) < 1e-10,
                    "ring(" << n << ") eigensolver sigma_max");
    }
    return "";
}

// Schedule gate: the published tuple is accepted; a 200-point adversarial
// lattice is rejected with the correct violation named each time.
std::string criterion_schedule_gate() {
    const auto ring10 = GraphTopology::ring(10);
    const StepSchedule published{.a = 0.1, .b = 0.2525, .delta1 = 0.1, .delta2 = 1.0,
                                 .epsilon_scale = 1e-5};
    ACC_REQUIRE(validate(published, &ring10).ok(),
                "published tuple rejected: " << validate(published, &ring10).to_string());

    struct Adversarial {
        StepSchedule schedule;
        std::string expected;
    };
    std::vector<Adversarial> lattice;
    auto tuple = [&](double a, double b, double d1, double d2, std::string expected) {
        lattice.push_back({{.a = a, .b = b, .delta1 = d1, .delta2 = d2, .epsilon_scale = 1.0},
                           std::move(expected)});
    };

    for (int i = 0; i < 60; ++i)  // 3*delta1 >= delta2
        tuple(0.1, 0.1, 0.34 + 0.01 * i, 1.0, "three_delta1_lt_delta2");
    for (int i = 1; i <= 40; ++i)  // delta2 > 1
        tuple(0.1, 0.1, 0.1, 1.0 + 0.05 * i, "delta2_le_one");
    for (int i = 0; i < 40; ++i)  // delta1/2 + delta2 <= 1
        tuple(0.1, 0.1, 0.05, 0.55 + 0.01 * i, "delta1_half_plus_delta2_gt_one");
    for (int i = 0; i < 20; ++i)  // delta2 <= 1/2
        tuple(0.1, 0.1, 0.01, 0.05 + 0.02 * i, "delta2_gt_half");
    for (int i = 0; i < 10; ++i)  // delta1 <= 0
        tuple(0.1, 0.1, -0.1 * i, 1.0, "delta1_positive");
    for (int i = 0; i < 10; ++i)  // a <= 0
        tuple(-0.05 * i, 0.1, 0.1, 1.0, "a_positive");
    for (int i = 0; i < 10; ++i)  // b <= 0
        tuple(0.1, -0.05 * i, 0.1, 1.0, "b_positive");
    for (int i = 0; i < 20; ++i)  // b sigma_max >= 2 on the 10-ring
        tuple(0.1, 0.55 + 0.1 * i, 0.1, 1.0, "consensus_gain_unit_circle");

    ACC_REQUIRE(lattice.size() >= 200, "lattice holds only " << lattice.size() << " tuples");
    for (std::size_t t = 0; t < lattice.size(); ++t) {
        const auto report = validate(lattice[t].schedule, &ring10);
        ACC_REQUIRE(!report.ok(), "tuple " << t << " unexpectedly accepted");
        ACC_REQUIRE(report.has(lattice[t].expected),
                    "tuple " << t << ": expected " << lattice[t].expected << ", got "
                             << report.to_string());
    }
    return "";
}

SimConfig desk_noniid_config() {
    SimConfig config;
    config.topology = {.kind = TopologySpec::Kind::ring, .n = 10};
    config.schedule = {.a = 0.1, .b = 0.2525, .delta1 = 0.1, .delta2 = 1.0,
                       .epsilon_scale = 1e-5};
    config.problem.kind = ProblemSpec::Kind::mlp;
    config.problem.layers = {784, 64, 32, 10};
    config.problem.activation = Activation::relu;
    config.problem.partition = PartitionSpec::single_class();
    config.direction = GradientDirection::minibatch(8);
    config.upsilon0 = Upsilon0Spec::per_parameter(0.2);
    config.algorithm = Algorithm::detsgrad;
    config.max_iterations = 20000;
    config.warmup_epochs = 4;
    config.master_seed = 1;
    config.metric_cadence = 1000;
    config.threads = worker_threads();

    const char* mnist_dir = std::getenv("DETSGRAD_MNIST_DIR");
    if (mnist_dir != nullptr) {
        const std::string dir(mnist_dir);
        config.problem.data.source = DataSpec::Source::idx;
        config.problem.data.train_images = dir + "/train-images-idx3-ubyte";
        config.problem.data.train_labels = dir + "/train-labels-idx1-ubyte";
        config.problem.data.test_images = dir + "/t10k-images-idx3-ubyte";
        config.problem.data.test_labels = dir + "/t10k-labels-idx1-ubyte";
        config.problem.data.subset = 5000;
    } else {
        config.problem.data.source = DataSpec::Source::generated;
        config.problem.data.train_per_class = 500;
        config.problem.data.test_per_class = 100;
    }
    return config;
}

SimResult& desk_noniid_result() {
    static SimResult result = run(desk_noniid_config());
    return result;
}

// Desk-scale non-i.i.d. learning: single-class shards, every agent reaches
// all-class accuracy >= 60% with spread <= 5 points.
std::string criterion_desk_noniid() {
    const auto& result = desk_noniid_result();
    const auto eval =
        an::evaluate_classifier(*result.model, result.final_params, *result.test_data);
    std::ostringstream accs;
    for (const double a : eval.accuracy) accs << ' ' << 100.0 * a;
    for (std::size_t i = 0; i < eval.accuracy.size(); ++i)
        ACC_REQUIRE(eval.accuracy[i] >= 0.60,
                    "agent " << i << " accuracy " << 100.0 * eval.accuracy[i]
                             << "% < 60% (all:" << accs.str() << ")");
    ACC_REQUIRE(eval.max_spread <= 0.05,
                "accuracy spread " << 100.0 * eval.max_spread << " points > 5 (all:"
                                   << accs.str() << ")");
    return "";
}

// Communication reduction on the same run, plus the accounting formula on
// the published totals.
std::string criterion_communication_reduction() {
    const auto& result = desk_noniid_result();
    const long iters = result.iterations;
    for (std::size_t i = 0; i < result.metrics.final_broadcasts.size(); ++i) {
        const long b = result.metrics.final_broadcasts[i];
        ACC_REQUIRE(b <= static_cast<long>(0.6 * static_cast<double>(iters)),
                    "agent " << i << " broadcast " << b << " times over " << iters
                             << " iterations");
    }
    const double published = reduction_percent(61702.0, 240000.0);
    ACC_REQUIRE(std::abs(published - 74.2) <= 0.1,
                "accounting formula gives " << published << "% for the published inputs");
    return "";
}

// z^K sampling distribution: chi-square at 1e5 draws plus the harmonic
// closed form for K = 9.
std::string criterion_zk_sampler() {
    const StepSchedule schedule{.a = 1.0, .b = 0.1, .delta1 = 0.1, .delta2 = 1.0,
                                .epsilon_scale = 1.0};
    const long K = 9;
    const auto weights = an::zk_weights(schedule, K);

    double h10 = 0.0;
    for (int j = 1; j <= 10; ++j) h10 += 1.0 / j;
    ACC_REQUIRE(std::abs(weights[0] - 1.0 / h10) < 1e-3,
                "P(k=0) = " << weights[0] << " vs harmonic 1/H_10 = " << 1.0 / h10);

    RngStream rng(99, 0, RngStream::Tag::analysis);
    std::vector<long> counts(K + 1, 0);
    for (int draw = 0; draw < 100000; ++draw) counts[an::sample_zk_index(schedule, K, rng)]++;
    const double stat = an::chi_square_statistic(counts, weights);
    const double p = an::chi_square_pvalue(stat, static_cast<int>(K));
    ACC_REQUIRE(p > 0.01, "chi-square p = " << p << " (stat " << stat << ")");
    return "";
}

// Determinism: identical CSV bytes across different worker-thread counts.
std::string criterion_determinism() {
    auto config = quartic_base(10000, 7, 1e-5);
    config.threads = 1;
    const auto a = run(config);
    config.threads = 4;
    const auto b = run(config);
    ACC_REQUIRE(csv_bytes(a.metrics) == csv_bytes(b.metrics),
                "thread count changed the emitted CSV");

    auto mlp_config = desk_noniid_config();
    mlp_config.max_iterations = 300;
    mlp_config.warmup_epochs = 0;
    mlp_config.schedule.warmup = 100;
    mlp_config.metric_cadence = 50;
    mlp_config.threads = 1;
    const auto c = run(mlp_config);
    mlp_config.threads = worker_threads();
    const auto d = run(mlp_config);
    ACC_REQUIRE(csv_bytes(c.metrics) == csv_bytes(d.metrics),
                "thread count changed the classifier-run CSV");
    return "";
}

struct Criterion {
    int id;
    std::string title;
    std::function<std::string()> body;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "trigger soundness (10 seeds x 20k iterations)", criterion_trigger_soundness},
        {2, "upsilon0 = 0 equals continuous baseline bit-for-bit", criterion_upsilon0_equivalence},
        {3, "per-agent updates match the stacked matrix recursion", criterion_stacked_oracle},
        {4, "consensus decay slope <= -0.85 over the final decade", criterion_consensus_decay},
        {5, "gradients match central finite differences", criterion_gradient_correctness},
        {6, "ring spectra match closed forms and the eigensolver", criterion_spectral_correctness},
        {7, "schedule gate: published tuple in, adversarial lattice out", criterion_schedule_gate},
        {8, "desk-scale non-iid learning: >= 60% accuracy, <= 5pt spread", criterion_desk_noniid},
        {9, "communication reduction <= 60% broadcasts + published formula",
         criterion_communication_reduction},
        {10, "z^K sampler frequencies match alpha-proportional weights", criterion_zk_sampler},
        {11, "byte-identical CSV across worker-thread counts", criterion_determinism},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string failure;
        try {
            failure = criterion.body();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (failure.empty()) {
            std::printf("[PASS] %2d. %s (%.1f s)\n", criterion.id, criterion.title.c_str(),
                        seconds);
        } else {
            std::printf("[FAIL] %2d. %s (%.1f s)\n       %s\n", criterion.id,
                        criterion.title.c_str(), seconds, failure.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
