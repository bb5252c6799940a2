#include "srise/sanity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace srise {

namespace {

void check_pair(const SaliencyMap& a, const SaliencyMap& b) {
    if (a.height != b.height || a.width != b.width) {
        throw DimensionError("correlated maps must share dimensions");
    }
    if (a.values.empty()) throw DegenerateMapError("empty saliency map");
}

bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return std::clamp(sab / (std::sqrt(saa) * std::sqrt(sbb)), -1.0, 1.0);
}

/// Fractional ranks (ties get the mean of their rank range).
std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
    std::vector<double> rank(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

} // namespace

double map_correlation(const SaliencyMap& a, const SaliencyMap& b) {
    check_pair(a, b);
    if (is_constant(a.values) || is_constant(b.values)) {
        throw DegenerateMapError("map correlation is undefined for a constant map");
    }
    return pearson(a.values, b.values);
}

double spearman_correlation(const SaliencyMap& a, const SaliencyMap& b) {
    check_pair(a, b);
    if (is_constant(a.values) || is_constant(b.values)) {
        throw DegenerateMapError("map correlation is undefined for a constant map");
    }
    return pearson(ranks(a.values), ranks(b.values));
}

SanityReport randomization_check(const Image& a, const Image& b, const Embedder& trained,
                                 const ExplainConfig& cfg, const SanityConfig& scfg,
                                 std::uint64_t mask_seed1, std::uint64_t mask_seed2,
                                 std::uint64_t randomized_seed, SanityMaps* maps_out) {
    const RandomizedEmbedder randomized(scfg.randomized_dim, randomized_seed, a.height, a.width,
                                        a.channels);

    Rng rng1(mask_seed1);
    Rng rng2(mask_seed2);
    Rng rng_r(mask_seed1); // the randomized run replays the first mask stream

    SaliencyMap map_t1 = explain_pair(a, b, trained, cfg, rng1).map_a;
    SaliencyMap map_t2 = explain_pair(a, b, trained, cfg, rng2).map_a;
    SaliencyMap map_r = explain_pair(a, b, randomized, cfg, rng_r).map_a;

    SanityReport rep;
    rep.margin = scfg.margin;
    rep.r_rerun = map_correlation(map_t1, map_t2);
    rep.r_randomized = map_correlation(map_t1, map_r);
    rep.spearman_rerun = spearman_correlation(map_t1, map_t2);
    rep.spearman_randomized = spearman_correlation(map_t1, map_r);
    rep.passed = (rep.r_rerun - rep.r_randomized) >= scfg.margin;
    if (maps_out) {
        maps_out->trained1 = std::move(map_t1);
        maps_out->trained2 = std::move(map_t2);
        maps_out->randomized = std::move(map_r);
    }
    return rep;
}

SanityReport randomization_check(const Image& a, const Image& b, const Embedder& trained,
                                 const ExplainConfig& cfg, const SanityConfig& scfg, Rng& rng,
                                 SanityMaps* maps_out) {
    const std::uint64_t seed1 = rng.next_u64();
    const std::uint64_t seed2 = rng.next_u64();
    const std::uint64_t randomized_seed = rng.next_u64();
    return randomization_check(a, b, trained, cfg, scfg, seed1, seed2, randomized_seed, maps_out);
}

} // namespace srise
