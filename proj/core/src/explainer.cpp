#include "srise/explainer.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "srise/parallel.hpp"

namespace srise {

Image apply_mask(const Image& img, const Mask& m) {
    if (img.height != m.height || img.width != m.width) {
        throw DimensionError("mask shape " + std::to_string(m.height) + "x" +
                             std::to_string(m.width) + " does not match image " +
                             std::to_string(img.height) + "x" + std::to_string(img.width));
    }
    Image out(img.height, img.width, img.channels);
    const std::size_t pixels = img.pixel_count();
    for (std::size_t p = 0; p < pixels; ++p) {
        const double mv = m.values[p];
        for (int c = 0; c < img.channels; ++c) {
            out.data[p * img.channels + c] = img.data[p * img.channels + c] * mv;
        }
    }
    return out;
}

SaliencyMap normalize_map(const SaliencyMap& map) {
    SaliencyMap out(map.height, map.width);
    if (map.values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        return out; // constant map -> all zeros
    }
    const double inv = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < map.size(); ++i) {
        out.values[i] = (map.values[i] - lo) * inv;
    }
    return out;
}

namespace {

/// Per-mask scores for masking `masked_side` against the fixed embedding of
/// the other image. Scores land at their mask index, so the result does not
/// depend on scheduling; degenerate masked embeddings score 0 and are counted.
int score_masked_side(const Image& masked_side, const Embedding& other_emb, const Embedder& e,
                      const std::vector<Mask>& masks, int workers, std::vector<double>& scores) {
    const auto n = static_cast<std::int64_t>(masks.size());
    scores.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<unsigned char> degenerate(static_cast<std::size_t>(n), 0);

    const int effective_workers = e.concurrent_safe() ? workers : 1;
    parallel_chunks(effective_workers, n, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            const Image masked = apply_mask(masked_side, masks[static_cast<std::size_t>(i)]);
            const Embedding emb = e.embed(masked);
            const auto s = try_cosine_similarity(emb, other_emb);
            if (s) {
                scores[static_cast<std::size_t>(i)] = *s;
            } else {
                degenerate[static_cast<std::size_t>(i)] = 1;
            }
        }
    });
    int count = 0;
    for (const auto d : degenerate) count += d;
    return count;
}

/// Weighted sum of masks, accumulated in ascending mask index for every
/// pixel. Parallelism splits pixels, not masks, so the summation order per
/// pixel is fixed and runs are bit-identical for any worker count.
SaliencyMap weighted_sum(const std::vector<Mask>& masks, const std::vector<double>& scores,
                         int height, int width, int workers) {
    SaliencyMap acc(height, width);
    const auto pixels = static_cast<std::int64_t>(acc.size());
    parallel_chunks(workers, pixels, [&](std::int64_t begin, std::int64_t end) {
        for (std::size_t i = 0; i < masks.size(); ++i) {
            const double s = scores[i];
            const double* mv = masks[i].values.data();
            double* out = acc.values.data();
            for (std::int64_t p = begin; p < end; ++p) {
                out[p] += s * mv[p];
            }
        }
    });
    return acc;
}

} // namespace

PairExplanation explain_pair(const Image& a, const Image& b, const Embedder& e,
                             const ExplainConfig& cfg, Rng& rng) {
    if (!a.same_shape(b)) {
        throw DimensionError("pair images must share dimensions");
    }
    cfg.mask_cfg.validate_for(a.height, a.width);

    const std::vector<Mask> masks = generate_mask_batch(a.height, a.width, cfg.mask_cfg, rng);

    const Embedding emb_a = e.embed(a);
    const Embedding emb_b = e.embed(b);

    PairExplanation out;
    out.base_similarity = cosine_similarity(emb_a, emb_b);
    out.degenerate_a = score_masked_side(a, emb_b, e, masks, cfg.workers, out.per_mask_scores_a);
    out.degenerate_b = score_masked_side(b, emb_a, e, masks, cfg.workers, out.per_mask_scores_b);

    SaliencyMap raw_a = weighted_sum(masks, out.per_mask_scores_a, a.height, a.width, cfg.workers);
    SaliencyMap raw_b = weighted_sum(masks, out.per_mask_scores_b, a.height, a.width, cfg.workers);
    out.map_a = cfg.normalize ? normalize_map(raw_a) : std::move(raw_a);
    out.map_b = cfg.normalize ? normalize_map(raw_b) : std::move(raw_b);
    return out;
}

TripletExplanation explain_triplet(const Triplet& t, const Embedder& e,
                                   const ExplainConfig& cfg, Rng& rng) {
    if (!t.probe.same_shape(t.mate) || !t.probe.same_shape(t.nonmate)) {
        throw DimensionError("triplet images must share dimensions");
    }

    TripletExplanation out;
    if (cfg.shared_masks) {
        // Same batch for both pairs: replay the stream from the current state.
        Rng replay = rng;
        out.match = explain_pair(t.probe, t.mate, e, cfg, rng);
        out.nonmatch = explain_pair(t.probe, t.nonmate, e, cfg, replay);
    } else {
        out.match = explain_pair(t.probe, t.mate, e, cfg, rng);
        out.nonmatch = explain_pair(t.probe, t.nonmate, e, cfg, rng);
    }

    out.weight_match = 1.0;
    out.weight_nonmatch = 1.0;
    if (cfg.reweight == ReweightMode::Ratio) {
        const double sm = std::max(out.match.base_similarity, 0.0);
        const double sn = std::max(out.nonmatch.base_similarity, 0.0);
        if (sm == 0.0) {
            out.degenerate = true; // matching pair has no positive similarity to scale against
        } else {
            out.weight_nonmatch = std::clamp(sn / sm, 0.0, 1.0);
        }
    }
    return out;
}

SaliencyMap weighted_map(const SaliencyMap& map, double weight) {
    SaliencyMap out = map;
    for (double& v : out.values) v *= weight;
    return out;
}

} // namespace srise
