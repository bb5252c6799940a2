#pragma once

#include <vector>

#include "srise/embedding.hpp"
#include "srise/image.hpp"
#include "srise/masks.hpp"
#include "srise/rng.hpp"

namespace srise {

/// How the match / non-match maps of a triplet are scaled against each other.
enum class ReweightMode {
    Ratio, // weight_nonmatch = clamp(max(s_n,0) / max(s_m,0), 0, 1)
    None,  // both weights 1
};

struct ExplainConfig {
    MaskConfig mask_cfg;
    bool normalize = true; // per-map min-max
    ReweightMode reweight = ReweightMode::Ratio;
    bool shared_masks = false; // reuse one batch for both triplet pairs
    int workers = 1;           // per-mask forward passes fan out; output is worker-count invariant
};

/// Saliency maps and bookkeeping for one image pair.
struct PairExplanation {
    SaliencyMap map_a; // for the first image
    SaliencyMap map_b; // for the second image
    double base_similarity = 0.0;
    std::vector<double> per_mask_scores_a;
    std::vector<double> per_mask_scores_b;
    int degenerate_a = 0; // masks whose masked-image embedding was degenerate
    int degenerate_b = 0;
};

struct Triplet {
    Image probe;
    Image mate;
    Image nonmate;
};

struct TripletExplanation {
    PairExplanation match;    // {probe, mate}
    PairExplanation nonmatch; // {probe, nonmate}
    double weight_match = 1.0;
    double weight_nonmatch = 1.0;
    bool degenerate = false; // match base similarity clamped to zero
};

/// out(y,x,c) = img(y,x,c) * m(y,x); the mask is broadcast across channels.
Image apply_mask(const Image& img, const Mask& m);

/// Min-max rescale to [0,1]; a constant map maps to all zeros.
SaliencyMap normalize_map(const SaliencyMap& map);

/// The core algorithm. Samples one mask batch, scores every mask on both
/// sides (s_a_i from masking a, s_b_i from masking b), and accumulates the
/// score-weighted mask sums in ascending mask index. Masks whose masked
/// image embeds to a degenerate vector contribute score 0 and are counted.
PairExplanation explain_pair(const Image& a, const Image& b, const Embedder& e,
                             const ExplainConfig& cfg, Rng& rng);

/// Runs explain_pair on {probe,mate} and {probe,nonmate} (fresh batch for the
/// second pair unless cfg.shared_masks), then derives the pair weights.
TripletExplanation explain_triplet(const Triplet& t, const Embedder& e,
                                   const ExplainConfig& cfg, Rng& rng);

/// The pair map scaled by its weight, as rendered in triplet figures.
SaliencyMap weighted_map(const SaliencyMap& map, double weight);

} // namespace srise
