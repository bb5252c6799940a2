#pragma once

#include <string>

#include "srise/image.hpp"

namespace srise {

/// Decode an 8-bit PNG or JPEG (sniffed by magic bytes, not extension),
/// scale bytes to [0,1], and bilinearly resize to target_height x target_width.
/// Grayscale stays single-channel; palette images expand to RGB; alpha is dropped.
/// Throws DecodeError on unreadable input, ConfigError on a zero target dimension.
Image load_image(const std::string& path, int target_height, int target_width);

/// Decode without resizing.
Image load_image(const std::string& path);

/// Write an 8-bit PNG (grayscale or RGB); values are clamped and rounded to bytes.
void save_png(const Image& img, const std::string& path);

/// UTF-8 CSV grid: one line per image row, comma-separated, '.'-decimal,
/// shortest round-trip formatting.
void save_map_csv(const SaliencyMap& map, const std::string& path);

/// Binary stream: uint32 LE height, uint32 LE width, then float32 LE values row-major.
void save_map_binary(const SaliencyMap& map, const std::string& path);

/// Read back the binary saliency format.
SaliencyMap load_map_binary(const std::string& path);

} // namespace srise
