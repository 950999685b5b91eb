#pragma once

// Minimal per-agent round driver over the agent-module operations, used to
// cross-check the production path against the stacked matrix recursion with
// injected gradients.

#include <utility>
#include <vector>

#include "detsgrad/agent.hpp"
#include "detsgrad/graph.hpp"

namespace testsupport {

struct MiniNetwork {
    detsgrad::GraphTopology topology;
    detsgrad::StepSchedule schedule;
    double upsilon0;
    std::vector<detsgrad::AgentState> agents;

    MiniNetwork(detsgrad::GraphTopology topo, detsgrad::StepSchedule sched, double ups,
                const Eigen::VectorXd& stacked_w0)
        : topology(std::move(topo)), schedule(sched), upsilon0(ups) {
        const int n = topology.size();
        const int d = static_cast<int>(stacked_w0.size()) / n;
        agents.resize(n);
        for (int i = 0; i < n; ++i) {
            agents[i].id = i;
            agents[i].w = stacked_w0.segment(i * d, d);
            agents[i].w_hat_self = agents[i].w;
            for (const int j : topology.neighbors(i))
                agents[i].w_hat_neighbors[j] = Eigen::VectorXd::Zero(d);
        }
    }

    // Runs one round; returns the post-trigger stacked deviation ||e(k)||_1
    // (the value the update step uses).
    double round(long k, const std::vector<Eigen::VectorXd>& grads) {
        const int n = topology.size();
        std::vector<char> fire(n, 0);
        for (int i = 0; i < n; ++i)
            fire[i] = k == 0 || detsgrad::trigger_check(agents[i], k, upsilon0,
                                                        schedule.alpha(k), schedule.warmup);
        for (int i = 0; i < n; ++i) {
            if (!fire[i]) continue;
            agents[i].broadcast_count++;
            agents[i].w_hat_self = agents[i].w;
            for (const int j : topology.neighbors(i)) agents[j].w_hat_neighbors[i] = agents[i].w;
        }
        double stacked_e = 0.0;
        for (int i = 0; i < n; ++i) stacked_e += detsgrad::error_l1(agents[i]);
        for (int i = 0; i < n; ++i)
            detsgrad::local_update(agents[i], schedule.alpha(k), schedule.beta(k), grads[i]);
        return stacked_e;
    }

    Eigen::VectorXd stacked() const {
        const int d = static_cast<int>(agents[0].w.size());
        Eigen::VectorXd s(static_cast<int>(agents.size()) * d);
        for (std::size_t i = 0; i < agents.size(); ++i) s.segment(i * d, d) = agents[i].w;
        return s;
    }
};

}  // namespace testsupport
