#include "srise/overlay.hpp"

#include <algorithm>
#include <cmath>

namespace srise {

namespace {

std::array<std::array<double, 3>, 256> build_colormap() {
    // Anchor points of the blue->red ramp; linear in between.
    struct Anchor {
        int index;
        std::array<double, 3> rgb;
    };
    const Anchor anchors[] = {
        {0, {0.0, 0.0, 1.0}},
        {64, {0.0, 1.0, 1.0}},
        {128, {0.0, 1.0, 0.0}},
        {191, {1.0, 1.0, 0.0}},
        {255, {1.0, 0.0, 0.0}},
    };
    std::array<std::array<double, 3>, 256> lut{};
    for (std::size_t a = 0; a + 1 < std::size(anchors); ++a) {
        const auto& lo = anchors[a];
        const auto& hi = anchors[a + 1];
        for (int i = lo.index; i <= hi.index; ++i) {
            const double t = (hi.index == lo.index)
                                 ? 0.0
                                 : static_cast<double>(i - lo.index) / (hi.index - lo.index);
            for (int c = 0; c < 3; ++c) {
                lut[i][c] = lo.rgb[c] * (1.0 - t) + hi.rgb[c] * t;
            }
        }
    }
    return lut;
}

} // namespace

const std::array<std::array<double, 3>, 256>& heat_colormap() {
    static const auto lut = build_colormap();
    return lut;
}

std::array<double, 3> heat_color(double v) {
    const int idx = std::clamp(static_cast<int>(std::lround(v * 255.0)), 0, 255);
    return heat_colormap()[idx];
}

Image grayscale(const Image& img) {
    if (img.channels == 1) return img;
    Image out(img.height, img.width, 1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(y, x, 0) = 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) +
                              0.114 * img.at(y, x, 2);
        }
    }
    return out;
}

Image render_overlay(const Image& img, const SaliencyMap& map, double alpha) {
    if (img.height != map.height || img.width != map.width) {
        throw DimensionError("overlay shape mismatch: image " + std::to_string(img.height) + "x" +
                             std::to_string(img.width) + " vs map " + std::to_string(map.height) +
                             "x" + std::to_string(map.width));
    }
    const Image gray = grayscale(img);
    Image out(img.height, img.width, 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto heat = heat_color(map.at(y, x));
            const double g = gray.at(y, x, 0);
            for (int c = 0; c < 3; ++c) {
                out.at(y, x, c) = (1.0 - alpha) * g + alpha * heat[c];
            }
        }
    }
    return out;
}

} // namespace srise
