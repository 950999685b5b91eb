#pragma once

#include <iosfwd>
#include <vector>

namespace detsgrad {

// One recorded simulation round. The row for iteration k reflects the state
// w(k) at the start of the round, cumulative broadcast counts through round
// k, and the squared norm of the k -> k+1 increment.
struct MetricsRow {
    long k = 0;
    double consensus_error = 0.0;  // || (M (x) I) w ||^2
    double empirical_risk = 0.0;   // F(w) = sum_i f_i(w_i)
    double avg_grad_norm = 0.0;    // || (1/n) sum_i grad f_i(w_i) ||^2 on full shards
    double lyapunov = 0.0;         // F(w) + (1/(2 gamma_k)) w^T (L (x) I) w
    double increment_sq = 0.0;     // || w(k+1) - w(k) ||^2
    std::vector<long> broadcast_cum;  // per agent

    bool operator==(const MetricsRow&) const = default;
};

struct RunMetrics {
    int n_agents = 0;
    long iterations = 0;
    std::vector<MetricsRow> rows;

    // Per-recorded-row wall time in ms (time spent since the previous
    // recorded row). Volatile; deliberately not part of the CSV so output is
    // byte-identical across thread counts.
    std::vector<double> row_wall_ms;
    double total_wall_seconds = 0.0;

    std::vector<long> final_broadcasts;  // per agent, at end of run
    long trigger_violations = 0;         // post-exchange ||e||_1 >= v0*alpha_k occurrences
    double max_trigger_ratio = 0.0;      // max post-exchange ||e||_1 / (v0*alpha_k)
};

// Deterministic CSV: header then one row per recorded iteration, doubles
// printed with 17 significant digits so parsing restores them exactly.
// Columns: k,consensus_error,empirical_risk,avg_grad_norm,lyapunov,
//          increment_sq,bcast_0,...,bcast_{n-1}
void write_metrics_csv(const RunMetrics& metrics, std::ostream& out);

// Inverse of write_metrics_csv for the emitted columns. Throws ArtifactError
// (with 1-based row number) on malformed content.
RunMetrics read_metrics_csv(std::istream& in);

// Communication accounting: per-agent totals and the network-wide reduction
// relative to continuous broadcasting over the same iterations (warm-up
// broadcasts count as broadcasts).
struct BroadcastAccounting {
    std::vector<long> totals;
    long iterations = 0;
    double reduction_pct = 0.0;  // 100 * (1 - sum(totals) / (n * iterations))
};
BroadcastAccounting broadcast_accounting(const RunMetrics& metrics);

// The accounting formula alone, for externally reported inputs.
double reduction_percent(double avg_broadcasts, double iterations);

}  // namespace detsgrad
