#pragma once

#include <cstddef>
#include <vector>

#include "srise/error.hpp"

namespace srise {

/// Dense H x W x C raster with values in [0,1], row-major, channel-interleaved.
/// Channels is 1 (grayscale) or 3 (RGB).
struct Image {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    Image() = default;
    Image(int h, int w, int c, double fill = 0.0)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, fill) {}

    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

/// Per-pixel importance grid. Same spatial dimensions as the image it
/// explains; values are arbitrary finite reals until normalized to [0,1].
struct SaliencyMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    SaliencyMap() = default;
    SaliencyMap(int h, int w, double fill = 0.0)
        : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {}

    double& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return values.size(); }
};

/// Bilinear resize with corner-aligned sampling: output pixel (i,j) samples
/// input coordinate (i*(H-1)/(h-1), j*(W-1)/(w-1)); a 1-pixel output axis
/// samples the input axis midpoint. Identity when shapes already match.
Image resize_bilinear(const Image& img, int target_height, int target_width);

/// Constant image of the same shape; each channel holds that channel's mean.
/// Exactly idempotent: a constant channel maps to itself bit-for-bit.
Image mean_fill(const Image& img);

} // namespace srise
