#pragma once

#include <cstdint>

#include "srise/explainer.hpp"

namespace srise {

/// Pearson correlation over flattened pixel values, clamped to [-1,1].
/// Throws DegenerateMapError when either map is constant.
double map_correlation(const SaliencyMap& a, const SaliencyMap& b);

/// Spearman rank correlation (fractional ranks for ties); same error contract.
double spearman_correlation(const SaliencyMap& a, const SaliencyMap& b);

struct SanityConfig {
    double margin = 0.3; // required gap r_rerun - r_randomized
    int randomized_dim = 64;
};

/// Outcome of the model-parameter-randomization check.
struct SanityReport {
    double r_randomized = 0.0; // corr(trained map, randomized-embedder map)
    double r_rerun = 0.0;      // corr(trained maps from two mask seeds)
    double spearman_randomized = 0.0;
    double spearman_rerun = 0.0;
    double margin = 0.3;
    bool passed = false; // r_rerun - r_randomized >= margin
};

/// The three maps behind a report, for side-by-side rendering.
struct SanityMaps {
    SaliencyMap trained1;
    SaliencyMap trained2;
    SaliencyMap randomized;
};

/// Explicit-seed form: map_T1 and map_R share mask seed1, map_T2 uses seed2,
/// and the randomized embedder is constructed from randomized_seed.
SanityReport randomization_check(const Image& a, const Image& b, const Embedder& trained,
                                 const ExplainConfig& cfg, const SanityConfig& scfg,
                                 std::uint64_t mask_seed1, std::uint64_t mask_seed2,
                                 std::uint64_t randomized_seed, SanityMaps* maps_out = nullptr);

/// Convenience form; the three seeds are drawn from rng in that order.
SanityReport randomization_check(const Image& a, const Image& b, const Embedder& trained,
                                 const ExplainConfig& cfg, const SanityConfig& scfg, Rng& rng,
                                 SanityMaps* maps_out = nullptr);

} // namespace srise
