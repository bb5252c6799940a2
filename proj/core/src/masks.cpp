#include "srise/masks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace srise {

void MaskConfig::validate() const {
    if (num_masks < 1) throw ConfigError("num_masks must be >= 1");
    if (kernels_per_mask < 1) throw ConfigError("kernels_per_mask must be >= 1");
    if (kernel_size < 1 || kernel_size % 2 == 0) {
        throw ConfigError("kernel_size must be odd and positive, got " +
                          std::to_string(kernel_size));
    }
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
    if (!(amplitude > 0.0) || amplitude > 1.0) throw ConfigError("amplitude must be in (0,1]");
}

void MaskConfig::validate_for(int height, int width) const {
    validate();
    if (kernel_size > std::min(height, width)) {
        throw ConfigError("kernel_size " + std::to_string(kernel_size) +
                          " exceeds image extent " + std::to_string(height) + "x" +
                          std::to_string(width));
    }
}

std::vector<double> gaussian_kernel(int size, double sigma, double amplitude) {
    if (size < 1 || size % 2 == 0) {
        throw ConfigError("gaussian kernel size must be odd and positive, got " +
                          std::to_string(size));
    }
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
    if (!(amplitude > 0.0) || amplitude > 1.0) throw ConfigError("amplitude must be in (0,1]");

    const int r = size / 2;
    const double inv = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> k(static_cast<std::size_t>(size) * size);
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            k[static_cast<std::size_t>(dy + r) * size + (dx + r)] =
                amplitude * std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) * inv);
        }
    }
    return k;
}

Mask generate_mask(int height, int width, const MaskConfig& cfg, Rng& rng) {
    cfg.validate_for(height, width);
    const int s = cfg.kernel_size;
    const int r = s / 2;
    const std::vector<double> kernel = gaussian_kernel(s, cfg.sigma, cfg.amplitude);

    Mask m(height, width);
    for (int k = 0; k < cfg.kernels_per_mask; ++k) {
        // Center chosen so the kernel footprint stays fully inside the frame.
        const int cy = r + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(height - 2 * r)));
        const int cx = r + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(width - 2 * r)));
        for (int dy = -r; dy <= r; ++dy) {
            const double* krow = kernel.data() + static_cast<std::size_t>(dy + r) * s;
            double* mrow = m.values.data() + static_cast<std::size_t>(cy + dy) * width + (cx - r);
            if (cfg.merge == MergeMode::Max) {
                for (int dx = 0; dx < s; ++dx) {
                    mrow[dx] = std::max(mrow[dx], krow[dx]);
                }
            } else {
                for (int dx = 0; dx < s; ++dx) {
                    mrow[dx] = std::min(1.0, mrow[dx] + krow[dx]);
                }
            }
        }
    }
    return m;
}

std::vector<Mask> generate_mask_batch(int height, int width, const MaskConfig& cfg, Rng& rng) {
    cfg.validate_for(height, width);
    std::vector<Mask> batch;
    batch.reserve(static_cast<std::size_t>(cfg.num_masks));
    for (int i = 0; i < cfg.num_masks; ++i) {
        batch.push_back(generate_mask(height, width, cfg, rng));
    }
    return batch;
}

} // namespace srise
