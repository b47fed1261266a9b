#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trice/network.hpp"
#include "trice/tensor.hpp"

namespace trice {

/// Parse an IDX image file (big-endian magic 0x00000803, then N, rows, cols,
/// then unsigned bytes). Pixels are scaled to [0, 1]; result shape is
/// (N, 1, rows, cols). Malformed input raises ParseError naming the byte
/// offset.
Tensor parse_idx_images(const std::vector<std::uint8_t>& bytes);

/// Parse an IDX label file (magic 0x00000801, then N, then N bytes with
/// values 0-9).
std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes);

Tensor load_idx_images(const std::string& path);
std::vector<int> load_idx_labels(const std::string& path);

/// Serialize back to the IDX byte format; values are rescaled to 0-255.
void write_idx_images(const std::string& path, const Tensor& images);
void write_idx_labels(const std::string& path, const std::vector<int>& labels);

/// Load an images + labels pair as a dataset.
Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path,
                         int num_classes = 10);

}  // namespace trice
