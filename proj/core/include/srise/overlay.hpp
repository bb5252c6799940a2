#pragma once

#include <array>

#include "srise/image.hpp"

namespace srise {

/// Fixed 256-entry blue-to-red colormap used for every heatmap the toolkit
/// renders. Entry i interpolates linearly through the anchors
/// blue (0,0,1) -> cyan (0,1,1) -> green (0,1,0) -> yellow (1,1,0) -> red (1,0,0)
/// at i = 0, 64, 128, 191, 255.
const std::array<std::array<double, 3>, 256>& heat_colormap();

/// Map a normalized saliency value to its colormap entry (index = round(v*255), clamped).
std::array<double, 3> heat_color(double v);

/// Luma grayscale (0.299 R + 0.587 G + 0.114 B); single-channel input is returned as-is.
Image grayscale(const Image& img);

/// Blend: out = (1-alpha) * grayscale(img) + alpha * colormap(map), per pixel.
/// Output is always 3-channel. Throws DimensionError on shape mismatch.
Image render_overlay(const Image& img, const SaliencyMap& map, double alpha);

} // namespace srise
