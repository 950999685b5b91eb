#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detsgrad/dataset.hpp"

namespace detsgrad {

struct PartitionSpec {
    enum class Scheme { random_iid, single_class };
    Scheme scheme = Scheme::random_iid;
    long per_agent_count = 0;  // random_iid only

    static PartitionSpec random_iid(long per_agent_count) {
        return {Scheme::random_iid, per_agent_count};
    }
    static PartitionSpec single_class() { return {Scheme::single_class, 0}; }
};

std::string to_string(PartitionSpec::Scheme s);

// Disjoint per-agent shards of dataset row indices.
//   random_iid   – per_agent_count rows per agent drawn without replacement
//                  from the whole set (InsufficientData when it cannot).
//   single_class – agent i receives the rows labeled i, every shard truncated
//                  to the global minimum class count; requires
//                  n_agents == class count (ClassCountMismatch otherwise).
struct DataPartition {
    PartitionSpec::Scheme scheme;
    std::vector<std::vector<long>> shards;
};

DataPartition partition(const Dataset& data, const PartitionSpec& spec, int n_agents,
                        std::uint64_t seed);

// Procedurally rendered digit-glyph images (10 classes, stroke-rasterized
// with random affine jitter and pixel noise) in the same shape as the
// handwritten-digit corpus: 28x28 grayscale, labels 0..9. Stands in for real
// data in environments without the IDX files; identical downstream pipeline.
Dataset generate_digit_dataset(long per_class, std::uint64_t seed);

}  // namespace detsgrad
