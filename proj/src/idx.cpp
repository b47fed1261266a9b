#include "trice/idx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "trice/errors.hpp"

namespace trice {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset) {
    if (offset + 4 > bytes.size()) {
        throw ParseError("IDX: truncated header at byte offset " + std::to_string(offset));
    }
    return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
           (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
           static_cast<std::uint32_t>(bytes[offset + 3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const char buf[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(buf, 4);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

char hexdigit(std::uint32_t v) { return "0123456789abcdef"[v & 0xf]; }

std::string hex32(std::uint32_t v) {
    std::string s = "0x";
    for (int shift = 28; shift >= 0; shift -= 4) s += hexdigit(v >> shift);
    return s;
}

}  // namespace

Tensor parse_idx_images(const std::vector<std::uint8_t>& bytes) {
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != kImageMagic) {
        throw ParseError("IDX: unexpected magic " + hex32(magic) + " at byte offset 0 (expected " +
                         hex32(kImageMagic) + " for images)");
    }
    const std::uint32_t n = read_be32(bytes, 4);
    const std::uint32_t rows = read_be32(bytes, 8);
    const std::uint32_t cols = read_be32(bytes, 12);
    if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096 ||
        n > std::numeric_limits<std::uint32_t>::max() / (rows * cols)) {
        throw ParseError("IDX: dimension overflow in header (n=" + std::to_string(n) +
                         ", rows=" + std::to_string(rows) + ", cols=" + std::to_string(cols) + ")");
    }
    const std::size_t expected = static_cast<std::size_t>(n) * rows * cols;
    if (bytes.size() != 16 + expected) {
        throw ParseError("IDX: payload has " + std::to_string(bytes.size() - 16) +
                         " bytes from offset 16, expected " + std::to_string(expected));
    }
    Tensor images;
    images.shape = {static_cast<int>(n), 1, static_cast<int>(rows), static_cast<int>(cols)};
    images.data.resize(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        images.data[i] = static_cast<double>(bytes[16 + i]) / 255.0;
    }
    return images;
}

std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != kLabelMagic) {
        throw ParseError("IDX: unexpected magic " + hex32(magic) + " at byte offset 0 (expected " +
                         hex32(kLabelMagic) + " for labels)");
    }
    const std::uint32_t n = read_be32(bytes, 4);
    if (bytes.size() != 8 + n) {
        throw ParseError("IDX: payload has " + std::to_string(bytes.size() - 8) +
                         " bytes from offset 8, expected " + std::to_string(n));
    }
    std::vector<int> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint8_t v = bytes[8 + i];
        if (v > 9) {
            throw ParseError("IDX: label value " + std::to_string(v) + " at byte offset " +
                             std::to_string(8 + i) + " outside 0-9");
        }
        labels[i] = v;
    }
    return labels;
}

Tensor load_idx_images(const std::string& path) { return parse_idx_images(read_file(path)); }

std::vector<int> load_idx_labels(const std::string& path) {
    return parse_idx_labels(read_file(path));
}

void write_idx_images(const std::string& path, const Tensor& images) {
    if (images.ndim() != 4 || images.dim(1) != 1) {
        throw ConfigError("write_idx_images expects shape (N, 1, rows, cols), got " +
                          images.shape_str());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    write_be32(out, kImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.dim(0)));
    write_be32(out, static_cast<std::uint32_t>(images.dim(2)));
    write_be32(out, static_cast<std::uint32_t>(images.dim(3)));
    for (double v : images.data) {
        const double scaled = std::floor(v * 255.0 + 0.5);
        const auto byte = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
        out.put(static_cast<char>(byte));
    }
}

void write_idx_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) {
        if (l < 0 || l > 9) throw ConfigError("IDX labels must be 0-9, got " + std::to_string(l));
        out.put(static_cast<char>(l));
    }
}

Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path,
                         int num_classes) {
    Dataset d;
    d.inputs = load_idx_images(images_path);
    d.labels = load_idx_labels(labels_path);
    d.num_classes = num_classes;
    d.validate();
    return d;
}

}  // namespace trice
