#include "srise/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srise/parallel.hpp"

namespace srise {

void MetricConfig::validate() const {
    if (!(threshold > -1.0) || !(threshold < 1.0)) {
        throw ConfigError("metric threshold must lie in (-1,1)");
    }
    if (step < 1) throw ConfigError("metric step must be >= 1");
    if (!(max_fraction > 0.0) || max_fraction > 1.0) {
        throw ConfigError("max_fraction must be in (0,1]");
    }
}

std::vector<int> pixel_rank(const SaliencyMap& map) {
    std::vector<int> order(map.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return map.values[static_cast<std::size_t>(lhs)] >
               map.values[static_cast<std::size_t>(rhs)];
    });
    return order;
}

namespace {

void check_metric_inputs(const Image& target, const Image& other, const SaliencyMap& map) {
    if (!target.same_shape(other)) {
        throw DimensionError("metric pair images must share dimensions");
    }
    if (map.height != target.height || map.width != target.width) {
        throw DimensionError("saliency map does not match the image it explains");
    }
}

/// Shared sweep: walk the rank order, copying pixels from `source` into a
/// working copy of `start`, and stop once `stop(sim)` fires.
template <typename StopFn>
MetricResult run_sweep(const Image& start, const Image& source, const Image& other,
                       const SaliencyMap& map, const Embedder& e, const MetricConfig& cfg,
                       StopFn&& stop) {
    cfg.validate();
    const Embedding other_emb = e.embed(other);
    Image current = start;

    MetricResult res;
    double sim = cosine_similarity(e.embed(current), other_emb);
    res.curve.emplace_back(0, sim);
    if (stop(sim)) {
        res.fraction = 0.0;
        res.crossed = true;
        return res;
    }

    const auto total = static_cast<std::int64_t>(start.pixel_count());
    const auto budget = std::min<std::int64_t>(
        total, static_cast<std::int64_t>(std::llround(cfg.max_fraction * static_cast<double>(total))));
    const std::vector<int> order = pixel_rank(map);

    std::int64_t changed = 0;
    while (changed < budget) {
        const std::int64_t n = std::min<std::int64_t>(cfg.step, budget - changed);
        for (std::int64_t k = 0; k < n; ++k) {
            const auto p = static_cast<std::size_t>(order[static_cast<std::size_t>(changed + k)]);
            for (int c = 0; c < current.channels; ++c) {
                current.data[p * current.channels + c] = source.data[p * current.channels + c];
            }
        }
        changed += n;
        sim = cosine_similarity(e.embed(current), other_emb);
        res.curve.emplace_back(static_cast<int>(changed), sim);
        if (stop(sim)) {
            res.fraction = static_cast<double>(changed) / static_cast<double>(total);
            res.crossed = true;
            return res;
        }
    }
    res.fraction = cfg.max_fraction; // budget exhausted without crossing
    res.crossed = false;
    return res;
}

} // namespace

MetricResult deletion(const Image& target, const Image& other, const SaliencyMap& map,
                      const Embedder& e, const MetricConfig& cfg) {
    check_metric_inputs(target, other, map);
    const Image fill = mean_fill(target);
    return run_sweep(target, fill, other, map, e, cfg,
                     [&](double sim) { return sim < cfg.threshold; });
}

MetricResult insertion(const Image& target, const Image& other, const SaliencyMap& map,
                       const Embedder& e, const MetricConfig& cfg) {
    check_metric_inputs(target, other, map);
    const Image fill = mean_fill(target);
    return run_sweep(fill, target, other, map, e, cfg,
                     [&](double sim) { return sim > cfg.threshold; });
}

SaliencyMap random_saliency(int height, int width, Rng& rng) {
    SaliencyMap map(height, width);
    for (double& v : map.values) v = rng.uniform01();
    return map;
}

void DatasetReport::finalize() {
    double dsum = 0.0, isum = 0.0;
    for (const auto& row : rows) {
        dsum += row.del.fraction;
        isum += row.ins.fraction;
    }
    const double n = static_cast<double>(rows.size());
    mean_deletion = dsum / n;
    mean_insertion = isum / n;
    average = (mean_deletion + mean_insertion) / 2.0;
}

DatasetReport evaluate_dataset(const std::vector<PairSample>& pairs, const Embedder& e,
                               const MetricConfig& cfg, int workers) {
    if (pairs.empty()) throw InputError("evaluate_dataset: empty pair list");
    cfg.validate();

    DatasetReport report;
    report.rows.resize(pairs.size());
    const int effective_workers = e.concurrent_safe() ? workers : 1;
    parallel_chunks(effective_workers, static_cast<std::int64_t>(pairs.size()),
                    [&](std::int64_t begin, std::int64_t end) {
                        for (std::int64_t i = begin; i < end; ++i) {
                            const auto& p = pairs[static_cast<std::size_t>(i)];
                            auto& row = report.rows[static_cast<std::size_t>(i)];
                            row.id = p.id;
                            row.del = deletion(p.target, p.other, p.map, e, cfg);
                            row.ins = insertion(p.target, p.other, p.map, e, cfg);
                        }
                    });
    report.finalize();
    return report;
}

} // namespace srise
