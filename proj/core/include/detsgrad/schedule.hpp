#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "detsgrad/graph.hpp"

namespace detsgrad {

// Diminishing step-size sequences
//
//   alpha_k = a / (eps*k + 1)^delta2      (gradient gain)
//   beta_k  = b / (eps*k + 1)^delta1      (consensus gain)
//   gamma_k = alpha_k / beta_k
//
// eps = 1 gives the canonical power-law schedule; the scale factor
// generalizes it without affecting the validity conditions.
struct StepSchedule {
    double a = 0.1;
    double b = 0.2525;
    double delta1 = 0.1;
    double delta2 = 1.0;
    double epsilon_scale = 1.0;
    // Iterations k < warmup broadcast unconditionally (used for the
    // single-class experiments; 0 disables).
    long warmup = 0;

    double alpha(long k) const { return a / std::pow(epsilon_scale * static_cast<double>(k) + 1.0, delta2); }
    double beta(long k) const { return b / std::pow(epsilon_scale * static_cast<double>(k) + 1.0, delta1); }
    double gamma(long k) const { return alpha(k) / beta(k); }
};

// Safely inside the admissible region of the bound topology, with margin.
double default_consensus_gain(const GraphTopology& topology);

struct ValidationIssue {
    std::string name;    // stable identifier, e.g. "three_delta1_lt_delta2"
    std::string detail;  // human-readable diagnosis
};

struct ValidationReport {
    std::vector<ValidationIssue> violations;
    std::vector<std::string> notes;  // non-blocking observations

    bool ok() const { return violations.empty(); }
    bool has(const std::string& name) const;
    std::string to_string() const;
};

// Checks the step-size exponent conditions
//   0 < 3*delta1 < delta2 <= 1,  delta1/2 + delta2 > 1,  delta2 > 1/2
// and, when a topology is given, the consensus-gain condition that
// I - b*L has a single eigenvalue at 1 with the remaining eigenvalues
// strictly inside the unit circle, i.e. b * sigma_max(L) < 2. When b also
// exceeds the conservative sufficient bound 1/sigma_max(L) the report
// carries a note. A failed report blocks simulation start unless
// explicitly overridden.
ValidationReport validate(const StepSchedule& schedule, const GraphTopology* topology = nullptr);

struct SummabilityProbe {
    double sum_alpha = 0.0;
    double sum_beta = 0.0;
    double sum_alpha_sq = 0.0;
    double sum_alpha_sqrt_beta = 0.0;
};

// Partial sums over k = 0..K. Diagnostic: for a valid schedule the first two
// grow without bound while the last two plateau.
SummabilityProbe summability_probe(const StepSchedule& schedule, long K);

}  // namespace detsgrad
