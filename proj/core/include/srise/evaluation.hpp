#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srise/embedding.hpp"
#include "srise/image.hpp"
#include "srise/rng.hpp"

namespace srise {

struct MetricConfig {
    double threshold = 0.3; // similarity cutoff the pair decision uses
    int step = 1;           // pixels replaced between re-evaluations
    double max_fraction = 1.0;

    void validate() const;
};

struct MetricResult {
    double fraction = 0.0; // pixels changed at stop / total pixels
    bool crossed = false;  // whether the threshold was reached
    std::vector<std::pair<int, double>> curve; // (pixels_changed, similarity)
};

/// Pixel indices (row-major) sorted by saliency descending; ties keep
/// row-major order, so the permutation is deterministic.
std::vector<int> pixel_rank(const SaliencyMap& map);

/// Replace pixels of `target` (all channels at once) with its mean-fill
/// values in pixel_rank order, `step` pixels per round, re-embedding after
/// each round, until similarity against `other` drops below the threshold
/// or max_fraction of the pixels is spent.
MetricResult deletion(const Image& target, const Image& other, const SaliencyMap& map,
                      const Embedder& e, const MetricConfig& cfg);

/// Start from mean_fill(target) and restore original pixels in rank order
/// until similarity rises above the threshold.
MetricResult insertion(const Image& target, const Image& other, const SaliencyMap& map,
                       const Embedder& e, const MetricConfig& cfg);

/// Baseline map: i.i.d. uniform [0,1) values.
SaliencyMap random_saliency(int height, int width, Rng& rng);

/// One (target, other, map) evaluation unit of a dataset run.
struct PairSample {
    std::string id;
    Image target;
    Image other;
    SaliencyMap map;
};

struct DatasetRow {
    std::string id;
    MetricResult del;
    MetricResult ins;
};

struct DatasetReport {
    std::vector<DatasetRow> rows;
    double mean_deletion = 0.0;
    double mean_insertion = 0.0;
    double average = 0.0; // arithmetic mean of the two means

    void finalize();
};

/// Per-pair deletion and insertion plus the summary means. `workers` caps
/// dataset-level parallelism; results are identical for any worker count.
/// Throws InputError on an empty list.
DatasetReport evaluate_dataset(const std::vector<PairSample>& pairs, const Embedder& e,
                               const MetricConfig& cfg, int workers = 1);

} // namespace srise
