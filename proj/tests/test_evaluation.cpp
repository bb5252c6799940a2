#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "srise/evaluation.hpp"
#include "srise/fixtures.hpp"

using namespace srise;

namespace {

SaliencyMap map_from(std::initializer_list<double> vals, int h, int w) {
    SaliencyMap m(h, w);
    m.values = vals;
    return m;
}

/// 8x8 single-channel image with constant 4x4 quadrants.
Image quad_image(double p0, double p1, double p2, double p3) {
    Image img(8, 8, 1);
    const double vals[] = {p0, p1, p2, p3};
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            img.at(y, x, 0) = vals[(y / 4) * 2 + (x / 4)];
        }
    }
    return img;
}

/// Fully independent re-implementation of the deletion sweep used as the
/// exhaustive oracle: own mean computation, own descending stable sort, own
/// patch-mean embedding and cosine, one pixel per round.
struct Oracle8x8 {
    static std::vector<double> patch_mean2(const std::vector<double>& img) {
        std::vector<double> e(4, 0.0);
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 8; ++x) {
                e[static_cast<std::size_t>((y / 4) * 2 + (x / 4))] +=
                    img[static_cast<std::size_t>(y * 8 + x)];
            }
        }
        for (double& v : e) v /= 16.0;
        return e;
    }
    static double cosine(const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }
    static std::vector<int> rank_desc(const std::vector<double>& map) {
        std::vector<int> order(map.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
            return map[static_cast<std::size_t>(l)] > map[static_cast<std::size_t>(r)];
        });
        return order;
    }
    /// Minimal deleted-pixel count before similarity drops below theta
    /// (-1 when it never crosses).
    static int deletion_count(const Image& target, const Image& other,
                              const std::vector<double>& map, double theta) {
        std::vector<double> work(target.data);
        double mean = 0.0;
        for (const double v : work) mean += v;
        mean /= static_cast<double>(work.size());
        const std::vector<double> other_emb = patch_mean2(other.data);
        if (cosine(patch_mean2(work), other_emb) < theta) return 0;
        const auto order = rank_desc(map);
        for (std::size_t k = 0; k < order.size(); ++k) {
            work[static_cast<std::size_t>(order[k])] = mean;
            if (cosine(patch_mean2(work), other_emb) < theta) return static_cast<int>(k) + 1;
        }
        return -1;
    }
    static int insertion_count(const Image& target, const Image& other,
                               const std::vector<double>& map, double theta) {
        double mean = 0.0;
        for (const double v : target.data) mean += v;
        mean /= static_cast<double>(target.data.size());
        std::vector<double> work(target.data.size(), mean);
        const std::vector<double> other_emb = patch_mean2(other.data);
        if (cosine(patch_mean2(work), other_emb) > theta) return 0;
        const auto order = rank_desc(map);
        for (std::size_t k = 0; k < order.size(); ++k) {
            work[static_cast<std::size_t>(order[k])] = target.data[static_cast<std::size_t>(order[k])];
            if (cosine(patch_mean2(work), other_emb) > theta) return static_cast<int>(k) + 1;
        }
        return -1;
    }
};

} // namespace

TEST_CASE("pixel_rank") {
    SUBCASE("strictly decreasing map ranks in row-major order") {
        SaliencyMap m(2, 3);
        m.values = {6, 5, 4, 3, 2, 1};
        const auto order = pixel_rank(m);
        CHECK(order == std::vector<int>{0, 1, 2, 3, 4, 5});
    }
    SUBCASE("constant map falls back to exact row-major order") {
        SaliencyMap m(2, 3);
        for (double& v : m.values) v = 0.7;
        CHECK(pixel_rank(m) == std::vector<int>{0, 1, 2, 3, 4, 5});
    }
    SUBCASE("random map agrees with an independent stable-sort oracle") {
        SaliencyMap m(16, 16);
        Rng rng(123);
        for (double& v : m.values) v = rng.uniform_below(32) / 31.0; // force ties
        const auto got = pixel_rank(m);

        std::vector<std::pair<double, int>> keyed;
        for (int i = 0; i < 256; ++i) keyed.emplace_back(-m.values[static_cast<std::size_t>(i)], i);
        std::sort(keyed.begin(), keyed.end());
        for (int i = 0; i < 256; ++i) CHECK(got[static_cast<std::size_t>(i)] == keyed[static_cast<std::size_t>(i)].second);
    }
}

TEST_CASE("deletion and insertion edge contracts") {
    const PatchMeanEmbedder e(2, 8, 8, 1);
    const Image target = quad_image(0.9, 0.1, 0.1, 0.8);
    const Image other = quad_image(0.1, 0.9, 0.8, 0.1); // weakly similar pair
    SaliencyMap map(8, 8);
    Rng rng(1);
    for (double& v : map.values) v = rng.uniform01();

    MetricConfig cfg;
    SUBCASE("deletion returns 0 crossed when base similarity already below theta") {
        cfg.threshold = 0.99;
        const MetricResult r = deletion(target, other, map, e, cfg);
        CHECK(r.fraction == 0.0);
        CHECK(r.crossed);
        CHECK(r.curve.size() == 1);
    }
    SUBCASE("insertion returns 0 crossed when the mean-fill start already exceeds theta") {
        cfg.threshold = 0.05; // constant-vs-anything cosine is far above this
        const MetricResult r = insertion(target, other, map, e, cfg);
        CHECK(r.fraction == 0.0);
        CHECK(r.crossed);
    }
    SUBCASE("crossed=false forces fraction = max_fraction") {
        cfg.threshold = -0.5; // non-negative embeddings never reach it
        cfg.max_fraction = 0.37;
        cfg.step = 3;
        const MetricResult r = deletion(target, other, map, e, cfg);
        CHECK(!r.crossed);
        CHECK(r.fraction == 0.37);
    }
    SUBCASE("curve round 0 equals the base pair similarity exactly") {
        cfg.threshold = 0.3;
        const MetricResult r = deletion(target, other, map, e, cfg);
        const double base = cosine_similarity(e.embed(target), e.embed(other));
        REQUIRE(!r.curve.empty());
        CHECK(r.curve[0].first == 0);
        CHECK(r.curve[0].second == base);
    }
    SUBCASE("bad config throws") {
        cfg.threshold = 1.5;
        CHECK_THROWS_AS(deletion(target, other, map, e, cfg), ConfigError);
        cfg = MetricConfig{};
        cfg.step = 0;
        CHECK_THROWS_AS(deletion(target, other, map, e, cfg), ConfigError);
    }
    SUBCASE("dimension mismatch throws") {
        const SaliencyMap wrong(4, 8);
        cfg = MetricConfig{};
        CHECK_THROWS_AS(deletion(target, other, wrong, e, cfg), DimensionError);
    }
}

TEST_CASE("8x8 deletion and insertion match the exhaustive oracle within 2 pixels") {
    // Pair agreeing in exactly one quadrant bright enough to carry the
    // decision; the ideal map concentrates on that quadrant.
    const PatchMeanEmbedder e(2, 8, 8, 1);
    const Image target = quad_image(0.9, 0.05, 0.08, 0.06);
    const Image other = quad_image(0.88, 0.07, 0.05, 0.09); // agrees on quadrant 0
    SaliencyMap ideal(8, 8);
    Rng rng(5);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            ideal.at(y, x) = (y < 4 && x < 4) ? 0.9 + 0.1 * rng.uniform01() : 0.1 * rng.uniform01();
        }
    }

    MetricConfig cfg;
    cfg.threshold = 0.8;
    cfg.step = 1;

    const double base = cosine_similarity(e.embed(target), e.embed(other));
    REQUIRE(base >= cfg.threshold); // construction sanity

    const MetricResult del = deletion(target, other, ideal, e, cfg);
    const int oracle_del = Oracle8x8::deletion_count(target, other, ideal.values, cfg.threshold);
    REQUIRE(oracle_del >= 0);
    CHECK(std::abs(del.fraction - oracle_del / 64.0) <= 2.0 / 64.0);

    const MetricResult ins = insertion(target, other, ideal, e, cfg);
    const int oracle_ins = Oracle8x8::insertion_count(target, other, ideal.values, cfg.threshold);
    REQUIRE(oracle_ins >= 0);
    CHECK(std::abs(ins.fraction - oracle_ins / 64.0) <= 2.0 / 64.0);
}

TEST_CASE("deletion is bit-reproducible with step=1") {
    const PatchMeanEmbedder e(2, 8, 8, 1);
    const Image target = quad_image(0.9, 0.2, 0.3, 0.7);
    const Image other = quad_image(0.85, 0.25, 0.28, 0.72);
    SaliencyMap map(8, 8);
    Rng rng(2);
    for (double& v : map.values) v = rng.uniform01();
    MetricConfig cfg;
    cfg.threshold = 0.9;

    const MetricResult a = deletion(target, other, map, e, cfg);
    const MetricResult b = deletion(target, other, map, e, cfg);
    CHECK(a.fraction == b.fraction);
    CHECK(a.curve == b.curve);
}

TEST_CASE("random_saliency") {
    SUBCASE("same seed gives identical maps") {
        Rng r1(6), r2(6);
        CHECK(random_saliency(16, 16, r1).values == random_saliency(16, 16, r2).values);
    }
    SUBCASE("values live in [0,1)") {
        Rng rng(7);
        for (const double v : random_saliency(32, 32, rng).values) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }
    SUBCASE("rank order behaves like a uniform random permutation (Kendall tau)") {
        // For a uniform permutation of n=16 elements the inversion count has
        // mean n(n-1)/4 = 60 and variance n(n-1)(2n+5)/72 = 123.3; the mean
        // over 1000 seeded draws must sit within 5 standard errors.
        Rng rng(8);
        const int n = 16;
        double total = 0.0;
        for (int draw = 0; draw < 1000; ++draw) {
            const SaliencyMap m = random_saliency(4, 4, rng);
            const auto order = pixel_rank(m);
            int inversions = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    if (order[static_cast<std::size_t>(i)] > order[static_cast<std::size_t>(j)]) ++inversions;
                }
            }
            total += inversions;
        }
        const double mean = total / 1000.0;
        const double se = std::sqrt(123.33 / 1000.0);
        CHECK(std::abs(mean - 60.0) < 5.0 * se);
    }
}

TEST_CASE("evaluate_dataset") {
    const PatchMeanEmbedder e(4, 64, 64, 3);
    MetricConfig cfg;
    cfg.threshold = 0.75;
    cfg.step = 8;

    const auto make_sample = [&](std::uint64_t seed, const std::string& id) {
        const Triplet t = fixtures::make_metric_triplet(seed, 64);
        PairSample s;
        s.id = id;
        s.target = t.probe;
        s.other = t.mate;
        Rng rng(seed + 900);
        s.map = random_saliency(64, 64, rng);
        return s;
    };

    SUBCASE("empty list throws") {
        CHECK_THROWS_AS(evaluate_dataset({}, e, cfg), InputError);
    }
    SUBCASE("single pair report equals that pair's metrics") {
        const PairSample s = make_sample(1, "t0");
        const DatasetReport rep = evaluate_dataset({s}, e, cfg);
        REQUIRE(rep.rows.size() == 1);
        const MetricResult del = deletion(s.target, s.other, s.map, e, cfg);
        const MetricResult ins = insertion(s.target, s.other, s.map, e, cfg);
        CHECK(rep.rows[0].del.fraction == del.fraction);
        CHECK(rep.rows[0].ins.fraction == ins.fraction);
        CHECK(rep.mean_deletion == del.fraction);
        CHECK(rep.mean_insertion == ins.fraction);
        CHECK(rep.average == (del.fraction + ins.fraction) / 2.0);
    }
    SUBCASE("means are arithmetic means and the average is their midpoint") {
        const std::vector<PairSample> samples = {make_sample(1, "t0"), make_sample(2, "t1"),
                                                 make_sample(3, "t2")};
        const DatasetReport rep = evaluate_dataset(samples, e, cfg);
        REQUIRE(rep.rows.size() == 3);
        double dsum = 0.0, isum = 0.0;
        for (const auto& row : rep.rows) {
            dsum += row.del.fraction;
            isum += row.ins.fraction;
        }
        CHECK(rep.mean_deletion == doctest::Approx(dsum / 3.0).epsilon(1e-15));
        CHECK(rep.mean_insertion == doctest::Approx(isum / 3.0).epsilon(1e-15));
        CHECK(rep.average ==
              (rep.mean_deletion + rep.mean_insertion) / 2.0);
    }
    SUBCASE("worker count does not change results") {
        const std::vector<PairSample> samples = {make_sample(4, "t0"), make_sample(5, "t1"),
                                                 make_sample(6, "t2"), make_sample(7, "t3")};
        const DatasetReport one = evaluate_dataset(samples, e, cfg, 1);
        const DatasetReport four = evaluate_dataset(samples, e, cfg, 4);
        REQUIRE(one.rows.size() == four.rows.size());
        for (std::size_t i = 0; i < one.rows.size(); ++i) {
            CHECK(one.rows[i].del.fraction == four.rows[i].del.fraction);
            CHECK(one.rows[i].ins.fraction == four.rows[i].ins.fraction);
            CHECK(one.rows[i].del.curve == four.rows[i].del.curve);
        }
        CHECK(one.average == four.average);
    }
}
