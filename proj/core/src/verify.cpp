#include "detsgrad/verify.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "detsgrad/analysis.hpp"
#include "detsgrad/errors.hpp"
#include "detsgrad/metrics.hpp"

namespace detsgrad {

using nlohmann::json;

namespace {

struct SeedRun {
    std::filesystem::path dir;
    RunMetrics metrics;
    json summary;
};

std::vector<SeedRun> load_runs(const std::filesystem::path& run_dir) {
    if (!std::filesystem::exists(run_dir))
        throw ArtifactError("run directory " + run_dir.string() + " does not exist");

    std::vector<std::filesystem::path> seed_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
        if (entry.is_directory() && entry.path().filename().string().starts_with("seed_"))
            seed_dirs.push_back(entry.path());
    }
    // A bare seed directory (metrics.csv directly inside) also works.
    if (seed_dirs.empty() && std::filesystem::exists(run_dir / "metrics.csv"))
        seed_dirs.push_back(run_dir);
    if (seed_dirs.empty())
        throw ArtifactError("no seed_* run artifacts under " + run_dir.string());
    std::sort(seed_dirs.begin(), seed_dirs.end());

    std::vector<SeedRun> runs;
    for (const auto& dir : seed_dirs) {
        SeedRun run;
        run.dir = dir;
        const auto csv_path = dir / "metrics.csv";
        const auto summary_path = dir / "summary.json";
        if (!std::filesystem::exists(csv_path))
            throw ArtifactError("missing " + csv_path.string());
        if (!std::filesystem::exists(summary_path))
            throw ArtifactError("missing " + summary_path.string());
        std::ifstream csv(csv_path);
        run.metrics = read_metrics_csv(csv);
        if (run.metrics.rows.empty())
            throw ArtifactError("no rows in " + csv_path.string());
        std::ifstream sum(summary_path);
        try {
            run.summary = json::parse(sum);
        } catch (const json::parse_error& e) {
            throw ArtifactError("bad summary " + summary_path.string() + ": " + e.what());
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerificationCheck& c) { return !c.applicable || c.pass; });
}

std::string VerificationReport::to_json(int indent) const {
    json j;
    j["pass"] = all_pass();
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"applicable", c.applicable},
                       {"pass", c.pass},
                       {"detail", c.detail}});
    j["checks"] = arr;
    return j.dump(indent);
}

VerificationReport verify_run_dir(const std::filesystem::path& run_dir) {
    const auto runs = load_runs(run_dir);
    VerificationReport report;

    const std::string algorithm = runs.front().summary.value("algorithm", "");
    const double upsilon0 = runs.front().summary.value("upsilon0", 0.0);
    const double delta2 = runs.front().summary.contains("schedule")
                              ? runs.front().summary["schedule"].value("delta2", 1.0)
                              : 1.0;
    const bool distributed = algorithm != "centralized_sgd";
    const bool event_triggered = algorithm == "detsgrad";

    // trigger soundness
    {
        VerificationCheck check{.name = "trigger_soundness",
                                .applicable = event_triggered && upsilon0 > 0.0};
        long violations = 0;
        for (const auto& run : runs) violations += run.summary.value("trigger_violations", 0L);
        check.pass = violations == 0;
        check.detail = std::to_string(violations) + " post-exchange threshold violations across " +
                       std::to_string(runs.size()) + " seed(s)";
        report.checks.push_back(std::move(check));
    }

    // consensus slope over the final decade of the seed-mean series
    {
        VerificationCheck check{.name = "consensus_slope", .applicable = distributed};
        if (check.applicable) {
            const auto& rows0 = runs.front().metrics.rows;
            std::vector<analysis::SeriesPoint> mean_series(rows0.size());
            bool shapes_ok = true;
            for (std::size_t r = 0; r < rows0.size(); ++r) {
                mean_series[r].k = rows0[r].k;
                double acc = 0.0;
                for (const auto& run : runs) {
                    if (run.metrics.rows.size() != rows0.size() ||
                        run.metrics.rows[r].k != rows0[r].k) {
                        shapes_ok = false;
                        break;
                    }
                    acc += run.metrics.rows[r].consensus_error;
                }
                mean_series[r].value = acc / static_cast<double>(runs.size());
            }
            if (!shapes_ok) {
                check.pass = false;
                check.detail = "seed runs have mismatched recording grids";
            } else {
                const long last_k = mean_series.back().k;
                const double threshold = -(delta2 - 0.15);
                try {
                    const auto fit = analysis::fit_decay_rate(mean_series, last_k / 10, last_k);
                    check.pass = fit.slope <= threshold;
                    check.detail = "slope " + format_double(fit.slope) + " vs threshold " +
                                   format_double(threshold) + " (r^2 " + format_double(fit.r_squared) + ")";
                } catch (const Error& e) {
                    check.pass = false;
                    check.detail = e.what();
                }
            }
        }
        report.checks.push_back(std::move(check));
    }

    // Lyapunov trend on the seed-mean series
    {
        VerificationCheck check{.name = "lyapunov_trend", .applicable = distributed};
        if (check.applicable) {
            const auto& rows0 = runs.front().metrics.rows;
            std::vector<double> mean_v(rows0.size(), 0.0);
            for (const auto& run : runs)
                for (std::size_t r = 0; r < rows0.size() && r < run.metrics.rows.size(); ++r)
                    mean_v[r] += run.metrics.rows[r].lyapunov / static_cast<double>(runs.size());
            check.pass = analysis::non_increasing_trend(mean_v, 100, 0.05);
            check.detail = check.pass ? "smoothed V non-increasing over the final half"
                                      : "smoothed V rises by more than 5% in the final half";
        }
        report.checks.push_back(std::move(check));
    }

    // broadcast accounting consistency
    {
        VerificationCheck check{.name = "broadcast_accounting", .applicable = distributed};
        if (check.applicable) {
            check.pass = true;
            for (const auto& run : runs) {
                const int n = run.metrics.n_agents;
                std::vector<long> prev(n, 0);
                for (const auto& row : run.metrics.rows) {
                    for (int i = 0; i < n; ++i) {
                        const long b = row.broadcast_cum[i];
                        if (b < prev[i] || b > row.k + 1) {
                            check.pass = false;
                            check.detail = run.dir.string() + ": agent " + std::to_string(i) +
                                           " count " + std::to_string(b) + " invalid at k=" +
                                           std::to_string(row.k);
                        }
                        prev[i] = b;
                    }
                }
                const auto acc = broadcast_accounting(run.metrics);
                const auto declared = run.summary.value("broadcast_totals", std::vector<long>{});
                if (declared != acc.totals) {
                    check.pass = false;
                    check.detail = run.dir.string() + ": summary totals disagree with CSV";
                }
                const double declared_red = run.summary.value("reduction_pct", 0.0);
                if (std::abs(declared_red - acc.reduction_pct) > 1e-9) {
                    check.pass = false;
                    check.detail = run.dir.string() + ": summary reduction disagrees with CSV";
                }
            }
            if (check.pass)
                check.detail = "counts monotone, bounded by k+1, consistent with summaries";
        }
        report.checks.push_back(std::move(check));
    }

    return report;
}

VerificationReport verify_equivalence(const std::filesystem::path& dir_a,
                                      const std::filesystem::path& dir_b) {
    const auto runs_a = load_runs(dir_a);
    const auto runs_b = load_runs(dir_b);
    VerificationReport report;
    VerificationCheck check{.name = "upsilon0_zero_equivalence", .applicable = true};

    if (runs_a.size() != runs_b.size()) {
        check.pass = false;
        check.detail = "seed counts differ";
    } else {
        check.pass = true;
        for (std::size_t s = 0; s < runs_a.size(); ++s) {
            std::ostringstream csv_a, csv_b;
            write_metrics_csv(runs_a[s].metrics, csv_a);
            write_metrics_csv(runs_b[s].metrics, csv_b);
            if (csv_a.str() != csv_b.str()) {
                check.pass = false;
                check.detail = runs_a[s].dir.string() + " and " + runs_b[s].dir.string() +
                               " metrics differ";
                break;
            }
        }
        if (check.pass) check.detail = "metrics byte-identical across " +
                                       std::to_string(runs_a.size()) + " seed(s)";
    }
    report.checks.push_back(std::move(check));
    return report;
}

}  // namespace detsgrad
