#pragma once

#include <Eigen/Dense>
#include <map>

#include "detsgrad/rng.hpp"
#include "detsgrad/schedule.hpp"

namespace detsgrad {

// Broadcast threshold: either an absolute constant or a multiple of the
// parameter count (the paper's experiments use 0.2 per parameter).
struct Upsilon0Spec {
    enum class Mode { absolute, per_parameter };
    Mode mode = Mode::per_parameter;
    double value = 0.2;

    static Upsilon0Spec absolute(double v) { return {Mode::absolute, v}; }
    static Upsilon0Spec per_parameter(double c) { return {Mode::per_parameter, c}; }

    double resolve(int param_count) const {
        return mode == Mode::absolute ? value : value * static_cast<double>(param_count);
    }
};

// One agent's state between rounds. w is the current iterate, w_hat_self the
// value at the most recent triggering instant (w(0) before any trigger), and
// w_hat_neighbors holds the last value received from each neighbor — its keys
// are exactly the neighbor set of the bound topology. Exclusively owned by
// one worker during the compute phase of a round; broadcasts are exchanged
// only at the round barrier.
struct AgentState {
    int id = 0;
    Eigen::VectorXd w;
    Eigen::VectorXd w_hat_self;
    std::map<int, Eigen::VectorXd> w_hat_neighbors;
    long broadcast_count = 0;
    RngStream rng;
};

// Event trigger: broadcast at iteration k >= 1 iff k < warmup (forced
// warm-up window) or ||w - w_hat_self||_1 >= upsilon0 * alpha_k (inclusive,
// so ties broadcast). Iteration 0 broadcasts unconditionally and is handled
// by the caller.
bool trigger_check(const AgentState& agent, long k, double upsilon0, double alpha_k, long warmup);

// In-place iterate update
//   w <- w - beta_k * sum_{j in N_i} (w_hat_self - w_hat_neighbors[j]) - alpha_k * g
// using last-broadcast values (not current iterates) in the consensus term.
void local_update(AgentState& agent, double alpha_k, double beta_k, const Eigen::VectorXd& g);

// Current deviation from the last self-broadcast and its l1 norm.
struct ErrorVector {
    Eigen::VectorXd e;
    double l1_norm = 0.0;
};
ErrorVector error_vector(const AgentState& agent);

// l1 norm of w - w_hat_self without materializing the difference.
double error_l1(const AgentState& agent);

}  // namespace detsgrad
