#include <doctest.h>

#include <cmath>

#include "detsgrad/graph.hpp"
#include "detsgrad/rng.hpp"
#include "detsgrad/schedule.hpp"

using namespace detsgrad;

namespace {
StepSchedule paper_schedule() {
    return {.a = 0.1, .b = 0.2525, .delta1 = 0.1, .delta2 = 1.0, .epsilon_scale = 1e-5};
}
}  // namespace

TEST_CASE("alpha/beta/gamma evaluate the power-law forms") {
    const auto s = paper_schedule();
    CHECK(s.alpha(0) == 0.1);     // (eps*0 + 1)^delta2 = 1
    CHECK(s.beta(0) == 0.2525);   // same
    CHECK(s.gamma(0) == doctest::Approx(0.1 / 0.2525).epsilon(1e-15));

    // eps*k + 1 = 2 at k = 1e5
    CHECK(s.alpha(100000) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(s.beta(100000) == doctest::Approx(0.2525 / std::pow(2.0, 0.1)).epsilon(1e-12));

    // gamma * beta == alpha to near machine precision for huge k
    RngStream rng(3, 0, RngStream::Tag::test);
    for (int t = 0; t < 200; ++t) {
        const long k = static_cast<long>(rng.uniform_below(1000000000ULL));
        const double lhs = s.gamma(k) * s.beta(k);
        const double rhs = s.alpha(k);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::abs(rhs));
    }
}

TEST_CASE("alpha and beta are positive and strictly decreasing") {
    for (const auto& s : {paper_schedule(),
                          StepSchedule{.a = 1.0, .b = 0.1, .delta1 = 0.15, .delta2 = 0.95,
                                       .epsilon_scale = 1.0}}) {
        double prev_a = std::numeric_limits<double>::infinity();
        double prev_b = std::numeric_limits<double>::infinity();
        for (long k = 0; k < 2000; ++k) {
            const double ak = s.alpha(k), bk = s.beta(k);
            CHECK(ak > 0.0);
            CHECK(bk > 0.0);
            CHECK(ak < prev_a);
            CHECK(bk < prev_b);
            prev_a = ak;
            prev_b = bk;
        }
    }
}

TEST_CASE("validator accepts the published ring(10) tuple") {
    const auto ring10 = GraphTopology::ring(10);
    const auto report = validate(paper_schedule(), &ring10);
    CHECK(report.ok());
    // 0.2525 * 4 = 1.01: inside the unit-circle condition, outside the
    // conservative 1/sigma_max bound, which surfaces as a note.
    CHECK(report.notes.size() == 1);
}

TEST_CASE("validator rejects exponent violations by name") {
    const auto ring10 = GraphTopology::ring(10);

    auto s = paper_schedule();
    s.delta1 = 0.4;  // 3*0.4 = 1.2 >= delta2 = 1
    auto report = validate(s, &ring10);
    CHECK(!report.ok());
    CHECK(report.has("three_delta1_lt_delta2"));

    s = paper_schedule();
    s.delta2 = 1.2;
    report = validate(s, &ring10);
    CHECK(report.has("delta2_le_one"));

    s = paper_schedule();
    s.delta1 = 0.05;
    s.delta2 = 0.9;  // 0.025 + 0.9 = 0.925 <= 1
    report = validate(s, &ring10);
    CHECK(report.has("delta1_half_plus_delta2_gt_one"));

    s = paper_schedule();
    s.delta1 = 0.0;
    report = validate(s, &ring10);
    CHECK(report.has("delta1_positive"));

    s = paper_schedule();
    s.a = -1.0;
    report = validate(s, &ring10);
    CHECK(report.has("a_positive"));

    // consensus gain outside the unit-circle condition: b*sigma_max >= 2
    s = paper_schedule();
    s.b = 0.51;  // 0.51 * 4 = 2.04
    report = validate(s, &ring10);
    CHECK(report.has("consensus_gain_unit_circle"));
}

TEST_CASE("exhaustive exponent lattice: every invalid tuple is rejected") {
    // delta1, delta2 grid with step 0.05; a tuple is valid iff all three
    // exponent inequalities hold.
    for (int i1 = 0; i1 <= 20; ++i1) {
        for (int i2 = 0; i2 <= 24; ++i2) {
            StepSchedule s{.a = 0.1, .b = 0.1, .delta1 = 0.05 * i1, .delta2 = 0.05 * i2,
                           .epsilon_scale = 1.0};
            const bool valid = 0.0 < 3.0 * s.delta1 && 3.0 * s.delta1 < s.delta2 &&
                               s.delta2 <= 1.0 && s.delta1 / 2.0 + s.delta2 > 1.0 &&
                               s.delta2 > 0.5;
            const auto report = validate(s);
            CHECK(report.ok() == valid);
        }
    }
}

TEST_CASE("default consensus gain sits inside the admissible region") {
    const auto ring10 = GraphTopology::ring(10);
    const double b = default_consensus_gain(ring10);
    CHECK(b == doctest::Approx(0.9 / 4.0));
    auto s = paper_schedule();
    s.b = b;
    CHECK(validate(s, &ring10).ok());
}

TEST_CASE("summability probe reproduces the classic sums") {
    // harmonic: sum_{k=0}^{K} 1/(k+1) ~ ln(K+1) + gamma
    StepSchedule harmonic{.a = 1.0, .b = 1e-3, .delta1 = 0.1, .delta2 = 1.0, .epsilon_scale = 1.0};
    const long K = 1000000;
    const auto probe = summability_probe(harmonic, K);
    const double euler = 0.577215664901532861;
    CHECK(std::abs(probe.sum_alpha - (std::log(static_cast<double>(K) + 1.0) + euler)) /
              probe.sum_alpha <
          0.01);
    // Basel: sum alpha^2 -> pi^2/6
    CHECK(std::abs(probe.sum_alpha_sq - 1.6449340668482264) < 1e-3);
}

TEST_CASE("summability probe: alpha*sqrt(beta) plateaus while alpha and beta diverge") {
    // Published exponents at unit scale (eps = 1): the alpha*sqrt(beta) sum
    // has exponent delta2 + delta1/2 = 1.05, barely summable. Direct
    // summation gives partial-sum ratio ~1.131 between K = 1e6 and K = 1e5
    // (the naive expectation of ~1.02 is wrong; the tail is heavy).
    StepSchedule s{.a = 0.1, .b = 0.2525, .delta1 = 0.1, .delta2 = 1.0, .epsilon_scale = 1.0};
    const auto p5 = summability_probe(s, 100000);
    const auto p6 = summability_probe(s, 1000000);

    const double ratio_alpha_sqrt_beta = p6.sum_alpha_sqrt_beta / p5.sum_alpha_sqrt_beta;
    CHECK(ratio_alpha_sqrt_beta < 1.15);

    // the divergent sums keep growing much faster
    CHECK(p6.sum_beta / p5.sum_beta > 5.0);
    CHECK(p6.sum_alpha / p5.sum_alpha > ratio_alpha_sqrt_beta);

    // alpha^2 partial sums are Cauchy: successive differences vanish
    const double tail = p6.sum_alpha_sq - p5.sum_alpha_sq;
    CHECK(tail / p6.sum_alpha_sq < 1e-4);
}
