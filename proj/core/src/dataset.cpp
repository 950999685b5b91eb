#include "detsgrad/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>

#include "detsgrad/errors.hpp"

namespace detsgrad {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in, const std::string& what) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    if (!in) throw TruncatedFile("unexpected end of file while reading " + what);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
    const std::array<unsigned char, 4> b{static_cast<unsigned char>(v >> 24),
                                         static_cast<unsigned char>(v >> 16),
                                         static_cast<unsigned char>(v >> 8),
                                         static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::string hex(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

}  // namespace

int Dataset::class_count() const {
    int max_label = -1;
    for (const auto l : labels) max_label = std::max<int>(max_label, l);
    return max_label + 1;
}

std::vector<long> Dataset::class_histogram() const {
    std::vector<long> hist(class_count(), 0);
    for (const auto l : labels) ++hist[l];
    return hist;
}

Dataset Dataset::head(long n) const {
    if (n >= count) return *this;
    Dataset out;
    out.count = n;
    out.rows = rows;
    out.cols = cols;
    out.pixels.assign(pixels.begin(), pixels.begin() + n * feature_dim());
    out.labels.assign(labels.begin(), labels.begin() + n);
    return out;
}

IdxHeader read_idx_header(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open " + file.string());
    IdxHeader h;
    h.magic = read_be32(in, "magic");
    // Third magic byte encodes the type, fourth the dimension count.
    const int ndim = static_cast<int>(h.magic & 0xff);
    if (ndim < 1 || ndim > 4)
        throw BadMagic("implausible IDX dimension count in magic " + hex(h.magic));
    for (int d = 0; d < ndim; ++d) h.dims.push_back(read_be32(in, "dimension " + std::to_string(d)));
    return h;
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot open " + images_path.string());
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot open " + labels_path.string());

    const std::uint32_t img_magic = read_be32(img, "image magic");
    if (img_magic != kImagesMagic)
        throw BadMagic("images file " + images_path.string() + " has magic " + hex(img_magic) +
                       ", expected " + hex(kImagesMagic));
    const std::uint32_t lab_magic = read_be32(lab, "label magic");
    if (lab_magic != kLabelsMagic)
        throw BadMagic("labels file " + labels_path.string() + " has magic " + hex(lab_magic) +
                       ", expected " + hex(kLabelsMagic));

    const std::uint32_t n_images = read_be32(img, "image count");
    const std::uint32_t rows = read_be32(img, "row count");
    const std::uint32_t cols = read_be32(img, "column count");
    const std::uint32_t n_labels = read_be32(lab, "label count");
    if (n_images != n_labels)
        throw CountMismatch("images file has " + std::to_string(n_images) + " samples, labels file has " +
                            std::to_string(n_labels));

    Dataset data;
    data.count = n_images;
    data.rows = static_cast<int>(rows);
    data.cols = static_cast<int>(cols);

    const std::size_t n_pixels = std::size_t(n_images) * rows * cols;
    std::vector<unsigned char> raw(n_pixels);
    img.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n_pixels));
    if (static_cast<std::size_t>(img.gcount()) != n_pixels)
        throw TruncatedFile("images file " + images_path.string() + " truncated: expected " +
                            std::to_string(n_pixels) + " pixel bytes, got " +
                            std::to_string(img.gcount()));

    data.labels.resize(n_images);
    lab.read(reinterpret_cast<char*>(data.labels.data()), n_images);
    if (static_cast<std::uint32_t>(lab.gcount()) != n_labels)
        throw TruncatedFile("labels file " + labels_path.string() + " truncated: expected " +
                            std::to_string(n_labels) + " label bytes, got " +
                            std::to_string(lab.gcount()));

    data.pixels.resize(n_pixels);
    for (std::size_t i = 0; i < n_pixels; ++i)
        data.pixels[i] = static_cast<float>(raw[i]) / 255.0f;
    return data;
}

void write_idx(const Dataset& data, const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot open " + images_path.string() + " for writing");
    write_be32(img, kImagesMagic);
    write_be32(img, static_cast<std::uint32_t>(data.count));
    write_be32(img, static_cast<std::uint32_t>(data.rows));
    write_be32(img, static_cast<std::uint32_t>(data.cols));
    std::vector<unsigned char> raw(data.pixels.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const float v = std::clamp(data.pixels[i], 0.0f, 1.0f);
        raw[i] = static_cast<unsigned char>(v * 255.0f + 0.5f);
    }
    img.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));

    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot open " + labels_path.string() + " for writing");
    write_be32(lab, kLabelsMagic);
    write_be32(lab, static_cast<std::uint32_t>(data.count));
    lab.write(reinterpret_cast<const char*>(data.labels.data()),
              static_cast<std::streamsize>(data.labels.size()));
}

}  // namespace detsgrad
