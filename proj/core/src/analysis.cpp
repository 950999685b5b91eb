#include "detsgrad/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "detsgrad/errors.hpp"

namespace detsgrad::analysis {

RateFit fit_decay_rate(std::span<const SeriesPoint> series, long window_begin, long window_end) {
    std::vector<double> xs, ys;
    for (const auto& p : series) {
        if (p.k < window_begin || p.k > window_end) continue;
        if (!(p.value > 0.0))
            throw NonPositiveValues("fit_decay_rate: value " + std::to_string(p.value) + " at k=" +
                                    std::to_string(p.k) + " is not positive");
        xs.push_back(std::log(static_cast<double>(p.k) + 1.0));
        ys.push_back(std::log(p.value));
    }
    if (xs.size() < 30)
        throw WindowTooSmall("fit_decay_rate: window holds " + std::to_string(xs.size()) +
                             " points, need >= 30");

    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    RateFit fit;
    fit.window_begin = window_begin;
    fit.window_end = window_end;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);
    return fit;
}

std::vector<double> zk_weights(const StepSchedule& schedule, long K) {
    std::vector<double> w(K + 1);
    double total = 0.0;
    for (long k = 0; k <= K; ++k) {
        w[k] = schedule.alpha(k);
        total += w[k];
    }
    for (auto& v : w) v /= total;
    return w;
}

long sample_zk_index(const StepSchedule& schedule, long K, RngStream& rng) {
    double total = 0.0;
    for (long k = 0; k <= K; ++k) total += schedule.alpha(k);
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (long k = 0; k <= K; ++k) {
        acc += schedule.alpha(k);
        if (u < acc) return k;
    }
    return K;
}

std::pair<long, Eigen::VectorXd> sample_zk(std::span<const Eigen::VectorXd> history,
                                           const StepSchedule& schedule, RngStream& rng) {
    if (history.empty()) throw WindowTooSmall("sample_zk: empty trajectory history");
    const long K = static_cast<long>(history.size()) - 1;
    const long k = sample_zk_index(schedule, K, rng);
    return {k, history[k]};
}

AssumptionReport probe_assumptions(std::span<const ObjectiveOracle* const> oracles,
                                   std::span<const Eigen::VectorXd> trajectory,
                                   const GradientDirection& direction, int draws, RngStream& rng) {
    AssumptionReport report;
    if (trajectory.empty()) return report;

    Eigen::VectorXd g, mean, full;
    for (const auto* oracle : oracles) {
        for (const auto& w : trajectory) {
            mean.setZero(oracle->dim());
            double sq = 0.0;
            for (int t = 0; t < draws; ++t) {
                sample_stochastic_gradient(*oracle, w, direction, rng, g);
                mean += g;
                sq += g.squaredNorm();
            }
            mean /= static_cast<double>(draws);
            sq /= static_cast<double>(draws);
            oracle->full_gradient(w, full);
            report.unbiasedness_gap = std::max(report.unbiasedness_gap, (mean - full).norm());
            report.max_sq_grad_estimate = std::max(report.max_sq_grad_estimate, sq);
        }
        // Gradient-difference ratios over consecutive trajectory pairs.
        for (std::size_t t = 0; t + 1 < trajectory.size(); ++t) {
            const double dist = (trajectory[t + 1] - trajectory[t]).norm();
            if (dist == 0.0) continue;
            Eigen::VectorXd ga, gb;
            oracle->full_gradient(trajectory[t], ga);
            oracle->full_gradient(trajectory[t + 1], gb);
            report.lipschitz_lower_bound =
                std::max(report.lipschitz_lower_bound, (gb - ga).norm() / dist);
        }
    }
    return report;
}

ClassifierEvaluation evaluate_classifier(const Mlp& model,
                                         std::span<const Eigen::VectorXd> agent_params,
                                         const Dataset& test_data) {
    if (test_data.class_count() > model.n_classes())
        throw ShapeMismatch("test set has more classes than the model output");
    const int d = test_data.feature_dim();
    if (d != model.input_dim())
        throw ShapeMismatch("test set feature dimension does not match the model input");

    Eigen::MatrixXd X(d, test_data.count);
    for (long i = 0; i < test_data.count; ++i)
        for (int r = 0; r < d; ++r) X(r, i) = static_cast<double>(test_data.sample(i)[r]);

    ClassifierEvaluation eval;
    for (const auto& w : agent_params) {
        const auto pred = model.predict(w, X);
        long correct = 0;
        for (long i = 0; i < test_data.count; ++i)
            if (pred[i] == static_cast<int>(test_data.labels[i])) ++correct;
        eval.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test_data.count));
    }
    for (const double a : eval.accuracy)
        for (const double b : eval.accuracy) eval.max_spread = std::max(eval.max_spread, a - b);
    return eval;
}

namespace {

// Regularized incomplete gamma functions P(s,x) (series) and Q(s,x)
// (continued fraction), standard numerics.
double gamma_p_series(double s, double x) {
    double sum = 1.0 / s;
    double term = sum;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_contfrac(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double chi_square_pvalue(double statistic, int dof) {
    if (statistic <= 0.0) return 1.0;
    const double s = dof / 2.0;
    const double x = statistic / 2.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_contfrac(s, x);
}

double chi_square_statistic(std::span<const long> counts, std::span<const double> probabilities) {
    if (counts.size() != probabilities.size())
        throw DimensionMismatch("chi_square_statistic: counts/probabilities size mismatch");
    long total = 0;
    for (const long c : counts) total += c;
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probabilities[i] * static_cast<double>(total);
        if (expected <= 0.0) throw NonPositiveValues("chi_square_statistic: zero expected count");
        const double diff = static_cast<double>(counts[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

std::vector<double> smooth(std::span<const double> values, int window) {
    const long n = static_cast<long>(values.size());
    std::vector<double> out(n, 0.0);
    const int half = window / 2;
    for (long i = 0; i < n; ++i) {
        const long lo = std::max<long>(0, i - half);
        const long hi = std::min<long>(n - 1, i + half);
        double acc = 0.0;
        for (long j = lo; j <= hi; ++j) acc += values[j];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

bool non_increasing_trend(std::span<const double> values, int window, double tolerance) {
    const auto s = smooth(values, window);
    const std::size_t start = s.size() / 2;
    for (std::size_t i = start; i + 1 < s.size(); ++i) {
        const double scale = std::max(std::abs(s[i]), 1e-300);
        if ((s[i + 1] - s[i]) / scale > tolerance) return false;
    }
    return true;
}

}  // namespace detsgrad::analysis
