#pragma once

#include <cstdint>
#include <utility>

#include "srise/explainer.hpp"
#include "srise/image.hpp"

namespace srise {
namespace fixtures {

/// Synthetic face-pair stand-ins built on a 4x4 patch grid. Identity lives in
/// the per-patch colors, which is exactly the structure a patch-pooling
/// embedder responds to, so metric and oracle behavior is analytically
/// predictable without trained weights.

/// Triplet for metric work: probe and mate share a few bright patches
/// (near-pure channel colors), each side also has private bright patches the
/// other lacks, the rest is dark. The nonmate has an independent layout.
/// Pair similarity under a patch-mean embedder sits around 0.85 with a
/// mean-fill floor around 0.6.
Triplet make_metric_triplet(std::uint64_t seed, int size = 112);

/// Pair whose patch brightness decays smoothly from the image center, with
/// matching content (small brightness jitter). The patch-occlusion oracle on
/// such a pair is a smooth radial field, which makes rank comparisons against
/// perturbation maps meaningful down to pixel level.
std::pair<Image, Image> make_radial_pair(std::uint64_t seed, int size = 112);

/// Radial pair variant that is identical in the left half and independently
/// drawn in the right half.
std::pair<Image, Image> make_halfshare_pair(std::uint64_t seed, int size = 112);

/// Complementary-checkerboard pair: both images carry the same per-patch
/// brightness levels, but the probe lights only even pixels and the mate only
/// odd pixels, so the pointwise product is exactly zero everywhere. A patch
/// pooling model sees two aligned brightness profiles; any pixel-space
/// projection sees two orthogonal vectors. Built for the randomization check,
/// where the randomized embedder must produce structureless maps.
std::pair<Image, Image> make_checker_pair(std::uint64_t seed, int size = 112);

} // namespace fixtures
} // namespace srise
