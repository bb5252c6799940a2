#pragma once

#include <cstdint>
#include <vector>

#include "srise/error.hpp"
#include "srise/rng.hpp"

namespace srise {

/// How overlapping kernels are combined into one mask.
enum class MergeMode {
    Max,     // elementwise maximum (default; values never exceed amplitude)
    SumClip, // sum then clip to [0,1] (comparison switch)
};

/// Parameters of the random Gaussian-bump mask generator.
struct MaskConfig {
    int num_masks = 1000;      // N
    int kernels_per_mask = 3;  // K
    int kernel_size = 29;      // s, odd, must fit inside the image
    double sigma = 29.0 / 4.0; // bump width
    double amplitude = 1.0;    // peak value, in (0,1]
    std::uint64_t seed = 0;
    MergeMode merge = MergeMode::Max;

    /// Throws ConfigError if any field is out of range (s even, sigma <= 0, ...).
    void validate() const;
    /// Additionally checks that the kernel fits inside an h x w image.
    void validate_for(int height, int width) const;
};

/// One perturbation pattern: H x W values in [0,1], at least one positive.
struct Mask {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    Mask() = default;
    Mask(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, 0.0) {}

    double& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// s x s patch with value amplitude * exp(-(dx^2+dy^2) / (2 sigma^2)) at
/// offset (dx,dy) from the center. Throws ConfigError for even s.
std::vector<double> gaussian_kernel(int size, double sigma, double amplitude);

/// One mask: K kernel centers drawn uniformly over positions where the s x s
/// kernel lies fully inside the frame, merged per cfg.merge onto a zero grid.
/// Draw order is row then column per kernel, in kernel order.
Mask generate_mask(int height, int width, const MaskConfig& cfg, Rng& rng);

/// N independent masks from one generator stream; deterministic given the seed.
std::vector<Mask> generate_mask_batch(int height, int width, const MaskConfig& cfg, Rng& rng);

} // namespace srise
