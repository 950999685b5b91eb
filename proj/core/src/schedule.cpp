#include "detsgrad/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace detsgrad {

double default_consensus_gain(const GraphTopology& topology) {
    return 0.9 / topology.sigma_max();
}

bool ValidationReport::has(const std::string& name) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const ValidationIssue& v) { return v.name == name; });
}

std::string ValidationReport::to_string() const {
    if (ok()) return "valid";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].name << ": " << violations[i].detail;
    }
    return os.str();
}

ValidationReport validate(const StepSchedule& s, const GraphTopology* topology) {
    ValidationReport report;
    auto fail = [&](std::string name, std::string detail) {
        report.violations.push_back({std::move(name), std::move(detail)});
    };

    if (!(s.a > 0.0) || !std::isfinite(s.a))
        fail("a_positive", "alpha scale a must be finite and > 0, got " + std::to_string(s.a));
    if (!(s.b > 0.0) || !std::isfinite(s.b))
        fail("b_positive", "beta scale b must be finite and > 0, got " + std::to_string(s.b));
    if (!(s.epsilon_scale > 0.0) || !std::isfinite(s.epsilon_scale))
        fail("epsilon_positive", "epsilon scale must be finite and > 0, got " + std::to_string(s.epsilon_scale));
    if (s.warmup < 0)
        fail("warmup_nonnegative", "warmup must be >= 0, got " + std::to_string(s.warmup));
    if (!std::isfinite(s.delta1) || !std::isfinite(s.delta2)) {
        fail("deltas_finite", "decay exponents must be finite");
        return report;
    }

    if (!(s.delta1 > 0.0))
        fail("delta1_positive", "need 0 < 3*delta1, got delta1 = " + std::to_string(s.delta1));
    if (!(3.0 * s.delta1 < s.delta2))
        fail("three_delta1_lt_delta2",
             "need 3*delta1 < delta2, got 3*" + std::to_string(s.delta1) + " >= " + std::to_string(s.delta2));
    if (!(s.delta2 <= 1.0))
        fail("delta2_le_one", "need delta2 <= 1, got " + std::to_string(s.delta2));
    if (!(s.delta1 / 2.0 + s.delta2 > 1.0))
        fail("delta1_half_plus_delta2_gt_one",
             "need delta1/2 + delta2 > 1, got " + std::to_string(s.delta1 / 2.0 + s.delta2));
    if (!(s.delta2 > 0.5))
        fail("delta2_gt_half", "need delta2 > 1/2, got " + std::to_string(s.delta2));

    if (topology != nullptr && s.b > 0.0 && std::isfinite(s.b)) {
        const double sigma_max = topology->sigma_max();
        // I - b*L keeps a single eigenvalue at 1 (connected graph) and the
        // rest strictly inside the unit circle iff b*sigma_max < 2.
        if (!(s.b * sigma_max < 2.0))
            fail("consensus_gain_unit_circle",
                 "I - b*L has an eigenvalue outside the open unit circle: b*sigma_max = " +
                     std::to_string(s.b * sigma_max) + " >= 2");
        else if (!(s.b * sigma_max < 1.0))
            report.notes.push_back("b = " + std::to_string(s.b) +
                                   " exceeds the conservative bound 1/sigma_max = " +
                                   std::to_string(1.0 / sigma_max) +
                                   " but keeps I - b*L inside the unit circle");
    }
    return report;
}

SummabilityProbe summability_probe(const StepSchedule& s, long K) {
    SummabilityProbe p;
    for (long k = 0; k <= K; ++k) {
        const double ak = s.alpha(k);
        const double bk = s.beta(k);
        p.sum_alpha += ak;
        p.sum_beta += bk;
        p.sum_alpha_sq += ak * ak;
        p.sum_alpha_sqrt_beta += ak * std::sqrt(bk);
    }
    return p;
}

}  // namespace detsgrad
