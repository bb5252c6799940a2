#include "srise/image.hpp"

#include <algorithm>
#include <cmath>

namespace srise {

Image resize_bilinear(const Image& img, int target_height, int target_width) {
    if (target_height <= 0 || target_width <= 0) {
        throw ConfigError("resize target must be positive, got " +
                          std::to_string(target_height) + "x" + std::to_string(target_width));
    }
    if (target_height == img.height && target_width == img.width) {
        return img;
    }

    Image out(target_height, target_width, img.channels);
    const auto src_coord = [](int i, int out_n, int in_n) {
        if (out_n == 1) return (in_n - 1) / 2.0;
        return static_cast<double>(i) * (in_n - 1) / (out_n - 1);
    };

    for (int y = 0; y < target_height; ++y) {
        const double sy = src_coord(y, target_height, img.height);
        const int y0 = std::min(static_cast<int>(std::floor(sy)), img.height - 1);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = sy - y0;
        for (int x = 0; x < target_width; ++x) {
            const double sx = src_coord(x, target_width, img.width);
            const int x0 = std::min(static_cast<int>(std::floor(sx)), img.width - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = sx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(y0, x0, c) * (1.0 - fx) + img.at(y0, x1, c) * fx;
                const double bot = img.at(y1, x0, c) * (1.0 - fx) + img.at(y1, x1, c) * fx;
                out.at(y, x, c) = top * (1.0 - fy) + bot * fy;
            }
        }
    }
    return out;
}

Image mean_fill(const Image& img) {
    Image out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        double lo = img.at(0, 0, c);
        double hi = lo;
        double sum = 0.0;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                const double v = img.at(y, x, c);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                sum += v;
            }
        }
        // A constant channel keeps its exact value, which makes the
        // operation idempotent bit-for-bit.
        const double mean = (lo == hi) ? lo : sum / static_cast<double>(img.pixel_count());
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                out.at(y, x, c) = mean;
            }
        }
    }
    return out;
}

} // namespace srise
