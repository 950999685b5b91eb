#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace detsgrad {

// Labeled image set. Pixels are stored normalized to [0, 1] (byte / 255),
// row-major per sample; no other preprocessing.
struct Dataset {
    long count = 0;
    int rows = 0;
    int cols = 0;
    std::vector<float> pixels;          // count * rows * cols
    std::vector<std::uint8_t> labels;   // count

    int feature_dim() const { return rows * cols; }
    const float* sample(long i) const { return pixels.data() + i * feature_dim(); }

    // Number of distinct labels, assuming labels are 0..C-1.
    int class_count() const;
    // Per-class sample counts.
    std::vector<long> class_histogram() const;
    // Keeps the first n samples.
    Dataset head(long n) const;
};

struct IdxHeader {
    std::uint32_t magic = 0;
    std::vector<std::uint32_t> dims;
};

// Parses just the header of an IDX file (magic + big-endian dimensions).
IdxHeader read_idx_header(const std::filesystem::path& file);

// Loads an IDX image/label pair (images magic 0x00000803, labels magic
// 0x00000801, all integers big-endian). Throws BadMagic, CountMismatch, or
// TruncatedFile.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

// Writes a dataset back to the IDX pair format (pixels denormalized to bytes).
void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path);

}  // namespace detsgrad
