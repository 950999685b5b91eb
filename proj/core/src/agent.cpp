#include "detsgrad/agent.hpp"

#include "detsgrad/errors.hpp"

namespace detsgrad {

bool trigger_check(const AgentState& agent, long k, double upsilon0, double alpha_k, long warmup) {
    if (k < warmup) return true;
    return error_l1(agent) >= upsilon0 * alpha_k;
}

void local_update(AgentState& agent, double alpha_k, double beta_k, const Eigen::VectorXd& g) {
    if (g.size() != agent.w.size())
        throw DimensionMismatch("gradient dimension " + std::to_string(g.size()) +
                                " does not match iterate dimension " + std::to_string(agent.w.size()));
    Eigen::VectorXd consensus = Eigen::VectorXd::Zero(agent.w.size());
    for (const auto& [j, w_hat_j] : agent.w_hat_neighbors) {
        if (w_hat_j.size() != agent.w.size())
            throw DimensionMismatch("neighbor " + std::to_string(j) + " snapshot has wrong dimension");
        consensus += agent.w_hat_self - w_hat_j;
    }
    agent.w -= beta_k * consensus + alpha_k * g;
}

ErrorVector error_vector(const AgentState& agent) {
    ErrorVector out;
    out.e = agent.w - agent.w_hat_self;
    out.l1_norm = out.e.lpNorm<1>();
    return out;
}

double error_l1(const AgentState& agent) {
    return (agent.w - agent.w_hat_self).lpNorm<1>();
}

}  // namespace detsgrad
