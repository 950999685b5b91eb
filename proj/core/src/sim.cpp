#include "detsgrad/sim.hpp"

#include <chrono>
#include <numeric>

#include "detsgrad/errors.hpp"
#include "detsgrad/parallel.hpp"

namespace detsgrad {

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "detsgrad") return Algorithm::detsgrad;
    if (name == "dist_sgd_continuous") return Algorithm::dist_sgd_continuous;
    if (name == "centralized_sgd") return Algorithm::centralized_sgd;
    throw ConfigInvalid("unknown algorithm \"" + name + "\"");
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::detsgrad: return "detsgrad";
        case Algorithm::dist_sgd_continuous: return "dist_sgd_continuous";
        case Algorithm::centralized_sgd: return "centralized_sgd";
    }
    return "?";
}

GraphTopology TopologySpec::build() const {
    switch (kind) {
        case Kind::ring: return GraphTopology::ring(n);
        case Kind::complete: return GraphTopology::complete(n);
        case Kind::path: return GraphTopology::path(n);
        case Kind::custom:
            if (!edge_file.empty()) return GraphTopology::from_edge_list_file(edge_file);
            return GraphTopology::from_edges(edges, n > 0 ? n : -1);
    }
    throw ConfigInvalid("invalid topology kind");
}

namespace {

// Mean-of-shards view over several oracles, used by the centralized baseline
// on synthetic problems. Global sample index j maps to oracle j / m, local
// index j % m (shard sizes are equal for synthetic problems).
class PooledOracle final : public ObjectiveOracle {
public:
    explicit PooledOracle(const std::vector<std::unique_ptr<ObjectiveOracle>>& oracles)
        : oracles_(oracles), per_shard_(oracles.front()->shard_size()) {
        for (const auto& o : oracles_)
            if (o->shard_size() != per_shard_)
                throw ShapeMismatch("pooled synthetic shards must be equally sized");
    }

    int dim() const override { return oracles_.front()->dim(); }
    long shard_size() const override { return per_shard_ * static_cast<long>(oracles_.size()); }

    double loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const override {
        double acc = 0.0;
        for (const long j : batch) {
            const long local = j % per_shard_;
            acc += oracles_[j / per_shard_]->loss_at(w, std::span<const long>(&local, 1));
        }
        return acc / static_cast<double>(batch.size());
    }

    void grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                 Eigen::VectorXd& out) const override {
        out.setZero(dim());
        Eigen::VectorXd g(dim());
        for (const long j : batch) {
            const long local = j % per_shard_;
            oracles_[j / per_shard_]->grad_at(w, std::span<const long>(&local, 1), g);
            out += g;
        }
        out /= static_cast<double>(batch.size());
    }

private:
    const std::vector<std::unique_ptr<ObjectiveOracle>>& oracles_;
    long per_shard_;
};

struct ProblemBundle {
    std::vector<std::unique_ptr<ObjectiveOracle>> oracles;  // one per running agent
    std::vector<std::unique_ptr<ObjectiveOracle>> shard_oracles;  // keeps per-agent oracles alive for pooling
    std::shared_ptr<const Mlp> model;
    std::shared_ptr<const Dataset> train_data;
    std::shared_ptr<const Dataset> test_data;
    long shard_size = 0;  // representative (equalized) shard size
};

Dataset load_train_data(const DataSpec& spec, std::uint64_t seed) {
    if (spec.source == DataSpec::Source::generated)
        return generate_digit_dataset(spec.train_per_class, seed);
    Dataset d = load_idx(spec.train_images, spec.train_labels);
    if (spec.subset > 0) d = d.head(spec.subset);
    return d;
}

Dataset load_test_data(const DataSpec& spec, std::uint64_t seed) {
    if (spec.source == DataSpec::Source::generated)
        return generate_digit_dataset(spec.test_per_class, seed + 0x7e57);
    return load_idx(spec.test_images, spec.test_labels);
}

ProblemBundle build_problem(const SimConfig& config, int n_agents, bool pooled) {
    ProblemBundle bundle;
    const auto& p = config.problem;

    if (p.kind == ProblemSpec::Kind::synthetic) {
        auto per_agent = make_synthetic(p.synthetic, n_agents, config.master_seed);
        bundle.shard_size = per_agent.front()->shard_size();
        if (pooled) {
            bundle.shard_oracles = std::move(per_agent);
            bundle.oracles.push_back(std::make_unique<PooledOracle>(bundle.shard_oracles));
        } else {
            bundle.oracles = std::move(per_agent);
        }
        return bundle;
    }

    // MLP classification problem
    bundle.train_data = std::make_shared<const Dataset>(load_train_data(p.data, config.master_seed));
    bundle.test_data = std::make_shared<const Dataset>(load_test_data(p.data, config.master_seed));
    if (p.layers.front() != bundle.train_data->feature_dim())
        throw ShapeMismatch("model input layer " + std::to_string(p.layers.front()) +
                            " does not match dataset feature dimension " +
                            std::to_string(bundle.train_data->feature_dim()));
    bundle.model = make_mlp_classifier(p.layers, p.activation);

    const auto parts = partition(*bundle.train_data, p.partition, n_agents, config.master_seed);
    bundle.shard_size = static_cast<long>(parts.shards.front().size());
    if (pooled) {
        std::vector<long> all;
        for (const auto& shard : parts.shards) all.insert(all.end(), shard.begin(), shard.end());
        std::sort(all.begin(), all.end());
        bundle.oracles.push_back(
            std::make_unique<MlpOracle>(bundle.model, bundle.train_data, std::move(all)));
    } else {
        for (const auto& shard : parts.shards)
            bundle.oracles.push_back(std::make_unique<MlpOracle>(bundle.model, bundle.train_data, shard));
    }
    return bundle;
}

Eigen::VectorXd initial_iterate(const SimConfig& config, const ProblemBundle& bundle, int agent_id) {
    RngStream rng(config.master_seed, agent_id, RngStream::Tag::init_params);
    if (bundle.model) return bundle.model->init_params(rng);
    const int d = bundle.oracles.front()->dim();
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) w[i] = rng.normal(0.0, 0.5);
    return w;
}

}  // namespace

SimResult run(const SimConfig& config) {
    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();

    const bool centralized = config.algorithm == Algorithm::centralized_sgd;
    const bool continuous = config.algorithm == Algorithm::dist_sgd_continuous;

    SimResult result;

    // Topology and schedule (centralized ignores both the topology and the
    // trigger machinery).
    StepSchedule schedule = config.schedule;
    if (!centralized) {
        result.topology.emplace(config.topology.build());
        if (config.b_from_topology) schedule.b = default_consensus_gain(*result.topology);
        const auto report = validate(schedule, &*result.topology);
        if (!report.ok() && !config.allow_invalid_schedule)
            throw ConfigInvalid("schedule validation failed: " + report.to_string());
    }

    const int n = centralized ? 1 : result.topology->size();
    ProblemBundle bundle = build_problem(config, centralized ? config.topology.n : n, centralized);
    if (static_cast<int>(bundle.oracles.size()) != n)
        throw ConfigInvalid("oracle count does not match agent count");

    long iterations = config.max_iterations;
    if (config.max_epochs > 0) iterations = config.max_epochs * bundle.shard_size;
    if (config.warmup_epochs > 0) schedule.warmup = config.warmup_epochs * bundle.shard_size;
    if (iterations < 1) throw ConfigInvalid("run needs at least one iteration");

    const int d = bundle.oracles.front()->dim();
    const double upsilon0 = config.upsilon0.resolve(d);

    // Agent states
    std::vector<AgentState> agents(n);
    for (int i = 0; i < n; ++i) {
        agents[i].id = i;
        agents[i].w = initial_iterate(config, bundle, i);
        agents[i].rng = RngStream(config.master_seed, i, RngStream::Tag::data_sampling);
        if (!centralized) {
            agents[i].w_hat_self = agents[i].w;  // overwritten by the k=0 broadcast
            for (const int j : result.topology->neighbors(i))
                agents[i].w_hat_neighbors[j] = Eigen::VectorXd::Zero(d);
        }
    }

    WorkerPool pool(std::max(1, config.threads));

    RunMetrics& metrics = result.metrics;
    metrics.n_agents = n;
    metrics.iterations = iterations;

    // Per-round scratch, one slot per agent.
    std::vector<Eigen::VectorXd> grads(n, Eigen::VectorXd(d));
    std::vector<char> stage_broadcast(n, 0);
    std::vector<double> err_l1(n, 0.0);
    std::vector<Eigen::VectorXd> w_snapshot;  // continuous path
    if (continuous) w_snapshot.assign(n, Eigen::VectorXd(d));

    // Metric scratch
    std::vector<double> risk_slot(n, 0.0);
    std::vector<Eigen::VectorXd> grad_slot(n, Eigen::VectorXd(d));
    std::vector<double> incr_slot(n, 0.0);

    auto t_last_record = clock::now();

    for (long k = 0; k < iterations; ++k) {
        const double alpha_k = schedule.alpha(k);
        const double beta_k = schedule.beta(k);

        // Phase 1 (parallel): stochastic gradient at w_i(k), then the trigger
        // decision on the current deviation e_i(k). Gradient computation and
        // the communication decision are logically parallel.
        pool.parallel_for(n, [&](int i) {
            sample_stochastic_gradient(*bundle.oracles[i], agents[i].w, config.direction,
                                       agents[i].rng, grads[i]);
            if (centralized) return;
            if (continuous) {
                stage_broadcast[i] = 1;
                return;
            }
            if (k == 0) {
                stage_broadcast[i] = 1;  // initial broadcast is unconditional
                err_l1[i] = 0.0;
                return;
            }
            err_l1[i] = error_l1(agents[i]);
            stage_broadcast[i] =
                (k < schedule.warmup) || (err_l1[i] >= upsilon0 * alpha_k) ? 1 : 0;
        });

        // Barrier: broadcast exchange (instantaneous within the round).
        if (!centralized) {
            if (continuous) {
                for (int i = 0; i < n; ++i) {
                    agents[i].broadcast_count++;
                    w_snapshot[i] = agents[i].w;
                }
            } else {
                for (int i = 0; i < n; ++i) {
                    if (!stage_broadcast[i]) continue;
                    agents[i].broadcast_count++;
                    agents[i].w_hat_self = agents[i].w;
                    for (const int j : result.topology->neighbors(i))
                        agents[j].w_hat_neighbors[i] = agents[i].w;
                }
                // Trigger soundness bookkeeping (post-exchange deviation).
                if (upsilon0 > 0.0 && k >= std::max<long>(1, schedule.warmup)) {
                    const double threshold = upsilon0 * alpha_k;
                    for (int i = 0; i < n; ++i) {
                        const double e_post = stage_broadcast[i] ? 0.0 : err_l1[i];
                        if (e_post >= threshold) metrics.trigger_violations++;
                        metrics.max_trigger_ratio =
                            std::max(metrics.max_trigger_ratio, e_post / threshold);
                    }
                }
            }
        }

        // Metrics on the pre-update state w(k).
        const bool record = (k % config.metric_cadence == 0) || (k == iterations - 1);
        MetricsRow row;
        if (record) {
            pool.parallel_for(n, [&](int i) {
                risk_slot[i] = bundle.oracles[i]->full_loss(agents[i].w);
                bundle.oracles[i]->full_gradient(agents[i].w, grad_slot[i]);
            });
            row.k = k;
            if (centralized) {
                row.empirical_risk = risk_slot[0];
                row.avg_grad_norm = grad_slot[0].squaredNorm();
                row.lyapunov = row.empirical_risk;
            } else {
                Eigen::VectorXd mean_w = Eigen::VectorXd::Zero(d);
                Eigen::VectorXd mean_g = Eigen::VectorXd::Zero(d);
                double risk = 0.0;
                for (int i = 0; i < n; ++i) {
                    mean_w += agents[i].w;
                    mean_g += grad_slot[i];
                    risk += risk_slot[i];
                }
                mean_w /= static_cast<double>(n);
                mean_g /= static_cast<double>(n);
                double consensus = 0.0;
                for (int i = 0; i < n; ++i) consensus += (agents[i].w - mean_w).squaredNorm();
                // w^T (L (x) I) w across the stacked iterates: one term per edge.
                double laplacian_quad = 0.0;
                for (const auto& [i, j] : result.topology->edges())
                    laplacian_quad += (agents[i].w - agents[j].w).squaredNorm();
                row.consensus_error = consensus;
                row.empirical_risk = risk;
                row.avg_grad_norm = mean_g.squaredNorm();
                row.lyapunov = risk + laplacian_quad / (2.0 * schedule.gamma(k));
            }
            row.broadcast_cum.resize(n);
            for (int i = 0; i < n; ++i) row.broadcast_cum[i] = agents[i].broadcast_count;
        }

        // Phase 2 (parallel): local updates from the exchanged snapshots.
        pool.parallel_for(n, [&](int i) {
            Eigen::VectorXd w_before;
            if (record) w_before = agents[i].w;
            if (centralized) {
                agents[i].w -= alpha_k * grads[i];
            } else if (continuous) {
                Eigen::VectorXd consensus = Eigen::VectorXd::Zero(d);
                for (const int j : result.topology->neighbors(i))
                    consensus += w_snapshot[i] - w_snapshot[j];
                agents[i].w -= beta_k * consensus + alpha_k * grads[i];
            } else {
                local_update(agents[i], alpha_k, beta_k, grads[i]);
            }
            if (record) incr_slot[i] = (agents[i].w - w_before).squaredNorm();
        });

        if (record) {
            double incr = 0.0;
            for (int i = 0; i < n; ++i) incr += incr_slot[i];
            row.increment_sq = incr;
            metrics.rows.push_back(std::move(row));
            const auto now = clock::now();
            metrics.row_wall_ms.push_back(
                std::chrono::duration<double, std::milli>(now - t_last_record).count());
            t_last_record = now;
        }
    }

    metrics.final_broadcasts.resize(n);
    for (int i = 0; i < n; ++i) metrics.final_broadcasts[i] = agents[i].broadcast_count;
    metrics.total_wall_seconds = std::chrono::duration<double>(clock::now() - t_start).count();

    result.final_params.reserve(n);
    for (auto& a : agents) result.final_params.push_back(std::move(a.w));
    result.schedule_used = schedule;
    result.upsilon0_resolved = upsilon0;
    result.iterations = iterations;
    result.param_count = d;
    for (const auto& o : bundle.oracles) result.shard_sizes.push_back(o->shard_size());
    result.model = bundle.model;
    result.test_data = bundle.test_data;
    return result;
}

SimResult run_centralized_baseline(const SimConfig& config) {
    SimConfig c = config;
    c.algorithm = Algorithm::centralized_sgd;
    return run(c);
}

}  // namespace detsgrad
