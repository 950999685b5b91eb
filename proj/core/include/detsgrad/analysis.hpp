#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "detsgrad/dataset.hpp"
#include "detsgrad/mlp.hpp"
#include "detsgrad/oracle.hpp"
#include "detsgrad/rng.hpp"
#include "detsgrad/schedule.hpp"

namespace detsgrad::analysis {

struct SeriesPoint {
    long k = 0;
    double value = 0.0;
};

struct RateFit {
    double slope = 0.0;      // fitted log-log decay exponent
    double intercept = 0.0;  // log-space offset
    long window_begin = 0;   // iteration range used (inclusive k bounds)
    long window_end = 0;
    double r_squared = 0.0;
};

// Ordinary least squares of log(value) on log(k+1) over points with
// window_begin <= k <= window_end; the slope estimates the empirical decay
// exponent. Needs >= 30 points in the window (WindowTooSmall) and strictly
// positive values (NonPositiveValues).
RateFit fit_decay_rate(std::span<const SeriesPoint> series, long window_begin, long window_end);

// Probability weights P(z^K = w_k) = alpha_k / sum_j alpha_j for k = 0..K.
std::vector<double> zk_weights(const StepSchedule& schedule, long K);

// Samples an index from {0..K} with the zk_weights distribution.
long sample_zk_index(const StepSchedule& schedule, long K, RngStream& rng);

// Samples an iterate from the trajectory history with the stated weights;
// returns (index, iterate).
std::pair<long, Eigen::VectorXd> sample_zk(std::span<const Eigen::VectorXd> history,
                                           const StepSchedule& schedule, RngStream& rng);

// Empirical probes of the stochastic-gradient assumptions on a trajectory
// sample. Diagnostic only; the Lipschitz figure is a lower-bound estimate of
// the true constant, never the constant itself.
struct AssumptionReport {
    double unbiasedness_gap = 0.0;     // || mean of draws - full gradient ||_2, worst point
    double max_sq_grad_estimate = 0.0; // max_k mean ||g||^2 over draws
    double lipschitz_lower_bound = 0.0;// max ||grad f(a)-grad f(b)|| / ||a-b|| over pairs
};
AssumptionReport probe_assumptions(std::span<const ObjectiveOracle* const> oracles,
                                   std::span<const Eigen::VectorXd> trajectory,
                                   const GradientDirection& direction, int draws, RngStream& rng);

// Per-agent test accuracy in [0,1] plus the maximum pairwise spread.
struct ClassifierEvaluation {
    std::vector<double> accuracy;
    double max_spread = 0.0;
};
ClassifierEvaluation evaluate_classifier(const Mlp& model,
                                         std::span<const Eigen::VectorXd> agent_params,
                                         const Dataset& test_data);

// Upper-tail p-value of the chi-square distribution with `dof` degrees of
// freedom (regularized incomplete gamma).
double chi_square_pvalue(double statistic, int dof);

// Goodness-of-fit statistic of observed counts against expected probabilities.
double chi_square_statistic(std::span<const long> counts, std::span<const double> probabilities);

// Centered moving average with the given window (clamped at the ends).
std::vector<double> smooth(std::span<const double> values, int window);

// True when the series, smoothed over `window` points, never rises by more
// than `tolerance` (relative) from one point to the next over its final half.
bool non_increasing_trend(std::span<const double> values, int window, double tolerance);

}  // namespace detsgrad::analysis
