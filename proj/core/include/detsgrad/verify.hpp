#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace detsgrad {

// One post-run property check. `applicable` is false when the run kind does
// not exercise the property (e.g. trigger soundness on a continuous run).
struct VerificationCheck {
    std::string name;
    bool applicable = true;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool all_pass() const;
    std::string to_json(int indent = 2) const;
};

// Verifies an experiment output directory (containing seed_*/metrics.csv and
// seed_*/summary.json written by the runner):
//   trigger_soundness     zero post-exchange threshold violations, all seeds
//   consensus_slope       log-log slope of the seed-mean consensus error over
//                         the final decade <= -(delta2 - 0.15)
//   lyapunov_trend        window-100 smoothed V non-increasing over the final
//                         half within 5% relative fluctuation
//   broadcast_accounting  cumulative counts non-decreasing, <= k+1 per agent,
//                         and consistent with the summary totals/reduction
// Throws ArtifactError when artifacts are missing or a CSV row is corrupt.
VerificationReport verify_run_dir(const std::filesystem::path& run_dir);

// Pair check: byte-identical metrics between two runs that shared a seed
// (event-triggered with upsilon0 = 0 vs. the continuous baseline).
VerificationReport verify_equivalence(const std::filesystem::path& dir_a,
                                      const std::filesystem::path& dir_b);

}  // namespace detsgrad
