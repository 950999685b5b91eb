#include "detsgrad/partition.hpp"

#include <algorithm>
#include <cmath>

#include "detsgrad/errors.hpp"
#include "detsgrad/rng.hpp"

namespace detsgrad {

std::string to_string(PartitionSpec::Scheme s) {
    return s == PartitionSpec::Scheme::random_iid ? "random_iid" : "single_class";
}

DataPartition partition(const Dataset& data, const PartitionSpec& spec, int n_agents,
                        std::uint64_t seed) {
    if (n_agents < 1) throw ConfigInvalid("partition needs at least one agent");
    DataPartition out;
    out.scheme = spec.scheme;
    out.shards.resize(n_agents);

    if (spec.scheme == PartitionSpec::Scheme::random_iid) {
        const long need = spec.per_agent_count * n_agents;
        if (spec.per_agent_count < 1)
            throw InsufficientData("random_iid needs per_agent_count >= 1");
        if (need > data.count)
            throw InsufficientData("random_iid needs " + std::to_string(need) + " samples, dataset has " +
                                   std::to_string(data.count));
        RngStream rng(seed, 0, RngStream::Tag::partition);
        const auto drawn = rng.sample_without_replacement(data.count, need);
        // Deal the drawn rows round-robin so each shard is itself a uniform
        // draw; shards remain disjoint by construction.
        for (long j = 0; j < need; ++j) out.shards[j % n_agents].push_back(drawn[j]);
        for (auto& shard : out.shards) std::sort(shard.begin(), shard.end());
        return out;
    }

    // single_class
    const int classes = data.class_count();
    if (classes != n_agents)
        throw ClassCountMismatch("single_class partition needs n_agents == class count (" +
                                 std::to_string(classes) + "), got " + std::to_string(n_agents));
    std::vector<std::vector<long>> by_class(classes);
    for (long i = 0; i < data.count; ++i) by_class[data.labels[i]].push_back(i);
    long min_count = data.count;
    for (const auto& rows : by_class) min_count = std::min<long>(min_count, rows.size());
    if (min_count == 0) throw InsufficientData("a class has no samples");
    for (int c = 0; c < classes; ++c) {
        by_class[c].resize(min_count);  // equalize counts at the global minimum
        out.shards[c] = std::move(by_class[c]);
    }
    return out;
}

namespace {

struct Stroke {
    double x0, y0, x1, y1;
};

// Digit glyphs as polyline strokes on the unit square (y grows downward).
const std::vector<std::vector<Stroke>>& glyphs() {
    static const std::vector<std::vector<Stroke>> g = {
        // 0
        {{0.25, 0.15, 0.75, 0.15}, {0.75, 0.15, 0.75, 0.85}, {0.75, 0.85, 0.25, 0.85},
         {0.25, 0.85, 0.25, 0.15}},
        // 1
        {{0.35, 0.28, 0.55, 0.12}, {0.55, 0.12, 0.55, 0.88}},
        // 2
        {{0.25, 0.25, 0.5, 0.12}, {0.5, 0.12, 0.75, 0.3}, {0.75, 0.3, 0.25, 0.85},
         {0.25, 0.85, 0.78, 0.85}},
        // 3
        {{0.25, 0.15, 0.72, 0.15}, {0.72, 0.15, 0.45, 0.45}, {0.45, 0.45, 0.75, 0.67},
         {0.75, 0.67, 0.5, 0.88}, {0.5, 0.88, 0.25, 0.8}},
        // 4
        {{0.62, 0.88, 0.62, 0.12}, {0.62, 0.12, 0.22, 0.62}, {0.22, 0.62, 0.8, 0.62}},
        // 5
        {{0.72, 0.15, 0.3, 0.15}, {0.3, 0.15, 0.28, 0.48}, {0.28, 0.48, 0.62, 0.45},
         {0.62, 0.45, 0.72, 0.68}, {0.72, 0.68, 0.55, 0.88}, {0.55, 0.88, 0.26, 0.82}},
        // 6
        {{0.68, 0.14, 0.34, 0.4}, {0.34, 0.4, 0.27, 0.72}, {0.27, 0.72, 0.5, 0.88},
         {0.5, 0.88, 0.72, 0.72}, {0.72, 0.72, 0.66, 0.5}, {0.66, 0.5, 0.3, 0.55}},
        // 7
        {{0.24, 0.15, 0.76, 0.15}, {0.76, 0.15, 0.42, 0.88}},
        // 8
        {{0.5, 0.12, 0.3, 0.3}, {0.3, 0.3, 0.5, 0.48}, {0.5, 0.48, 0.7, 0.3}, {0.7, 0.3, 0.5, 0.12},
         {0.5, 0.48, 0.28, 0.7}, {0.28, 0.7, 0.5, 0.9}, {0.5, 0.9, 0.72, 0.7}, {0.72, 0.7, 0.5, 0.48}},
        // 9
        {{0.7, 0.45, 0.38, 0.5}, {0.38, 0.5, 0.28, 0.3}, {0.28, 0.3, 0.5, 0.12},
         {0.5, 0.12, 0.7, 0.28}, {0.7, 0.28, 0.7, 0.6}, {0.7, 0.6, 0.45, 0.88}},
    };
    return g;
}

}  // namespace

Dataset generate_digit_dataset(long per_class, std::uint64_t seed) {
    constexpr int kSide = 28;
    Dataset data;
    data.rows = kSide;
    data.cols = kSide;
    data.count = per_class * 10;
    data.pixels.assign(static_cast<std::size_t>(data.count) * kSide * kSide, 0.0f);
    data.labels.resize(data.count);

    RngStream rng(seed, 0, RngStream::Tag::synthetic_data);
    long idx = 0;
    for (long rep = 0; rep < per_class; ++rep) {
        for (int digit = 0; digit < 10; ++digit, ++idx) {
            data.labels[idx] = static_cast<std::uint8_t>(digit);
            float* img = data.pixels.data() + idx * kSide * kSide;

            // Random affine jitter: shift, scale, rotation, shear.
            const double dx = rng.uniform(-2.5, 2.5);
            const double dy = rng.uniform(-2.5, 2.5);
            const double scale = rng.uniform(0.82, 1.12);
            const double angle = rng.uniform(-0.18, 0.18);
            const double shear = rng.uniform(-0.12, 0.12);
            const double ca = std::cos(angle), sa = std::sin(angle);
            const double pen = rng.uniform(0.9, 1.5);
            const double ink = rng.uniform(0.75, 1.0);

            auto map_point = [&](double u, double v, double& px, double& py) {
                const double cu = (u - 0.5) * scale, cv = (v - 0.5) * scale;
                const double ru = cu * ca - cv * sa + shear * cv;
                const double rv = cu * sa + cv * ca;
                px = (ru + 0.5) * (kSide - 8) + 4 + dx;
                py = (rv + 0.5) * (kSide - 8) + 4 + dy;
            };

            for (const auto& s : glyphs()[digit]) {
                double x0, y0, x1, y1;
                map_point(s.x0, s.y0, x0, y0);
                map_point(s.x1, s.y1, x1, y1);
                const double len = std::hypot(x1 - x0, y1 - y0);
                const int steps = std::max(2, static_cast<int>(len * 3));
                for (int t = 0; t <= steps; ++t) {
                    const double f = static_cast<double>(t) / steps;
                    const double cx = x0 + f * (x1 - x0);
                    const double cy = y0 + f * (y1 - y0);
                    // Gaussian pen stamp
                    const int r = static_cast<int>(std::ceil(2.0 * pen));
                    for (int yy = std::max(0, int(cy) - r); yy <= std::min(kSide - 1, int(cy) + r); ++yy)
                        for (int xx = std::max(0, int(cx) - r); xx <= std::min(kSide - 1, int(cx) + r); ++xx) {
                            const double d2 = (xx - cx) * (xx - cx) + (yy - cy) * (yy - cy);
                            const float v = static_cast<float>(ink * std::exp(-d2 / (pen * pen)));
                            float& px = img[yy * kSide + xx];
                            px = std::max(px, v);
                        }
                }
            }
            // Pixel noise, clamped to [0, 1]
            for (int p = 0; p < kSide * kSide; ++p) {
                const double noisy = img[p] + rng.normal(0.0, 0.04);
                img[p] = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
            }
        }
    }
    return data;
}

}  // namespace detsgrad
