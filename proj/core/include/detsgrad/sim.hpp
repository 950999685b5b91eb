#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "detsgrad/agent.hpp"
#include "detsgrad/dataset.hpp"
#include "detsgrad/graph.hpp"
#include "detsgrad/metrics.hpp"
#include "detsgrad/mlp.hpp"
#include "detsgrad/oracle.hpp"
#include "detsgrad/partition.hpp"
#include "detsgrad/schedule.hpp"
#include "detsgrad/synthetic.hpp"

namespace detsgrad {

enum class Algorithm { detsgrad, dist_sgd_continuous, centralized_sgd };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);

struct TopologySpec {
    enum class Kind { ring, complete, path, custom };
    Kind kind = Kind::ring;
    int n = 10;
    std::vector<std::pair<int, int>> edges;  // custom
    std::string edge_file;                   // custom, alternative to inline edges

    GraphTopology build() const;
};

struct DataSpec {
    enum class Source { generated, idx };
    Source source = Source::generated;
    // generated
    long train_per_class = 500;
    long test_per_class = 100;
    // idx
    std::string train_images, train_labels, test_images, test_labels;
    // keep only the first `subset` training samples when > 0
    long subset = 0;
};

struct ProblemSpec {
    enum class Kind { synthetic, mlp };
    Kind kind = Kind::synthetic;

    SyntheticSpec synthetic;

    // mlp
    std::vector<int> layers = {784, 64, 32, 10};
    Activation activation = Activation::relu;
    DataSpec data;
    PartitionSpec partition = PartitionSpec::single_class();
};

struct SimConfig {
    TopologySpec topology;
    StepSchedule schedule;
    bool b_from_topology = false;  // replace schedule.b with the topology default
    ProblemSpec problem;
    GradientDirection direction = GradientDirection::single();
    Upsilon0Spec upsilon0;
    Algorithm algorithm = Algorithm::detsgrad;
    long max_iterations = 10000;
    long max_epochs = 0;         // when > 0, iterations = epochs * shard size
    long warmup_epochs = 0;      // when > 0, schedule.warmup = this * shard size
    std::uint64_t master_seed = 1;
    long metric_cadence = 100;
    bool allow_invalid_schedule = false;
    int threads = 1;
};

struct SimResult {
    RunMetrics metrics;
    std::vector<Eigen::VectorXd> final_params;
    StepSchedule schedule_used;           // with resolved b / warmup
    double upsilon0_resolved = 0.0;
    long iterations = 0;
    int param_count = 0;
    std::vector<long> shard_sizes;
    std::optional<GraphTopology> topology;
    // Classifier context for post-run evaluation (null for synthetic runs).
    std::shared_ptr<const Mlp> model;
    std::shared_ptr<const Dataset> test_data;
};

// Executes the configured run: synchronous rounds, each consisting of a
// parallel gradient + trigger phase, a broadcast-exchange barrier, and a
// parallel update phase. Fully deterministic given the master seed,
// independent of the thread count. Throws ConfigInvalid / DataError.
SimResult run(const SimConfig& config);

// Single-node SGD on the pooled data with the alpha schedule only.
// Equivalent to run() with algorithm = centralized_sgd.
SimResult run_centralized_baseline(const SimConfig& config);

}  // namespace detsgrad
