#include "srise/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace srise {
namespace fixtures {

namespace {

constexpr int kGrid = 4;

struct PatchColors {
    std::array<std::array<double, 3>, kGrid * kGrid> colors{};
};

Image render(const PatchColors& pc, int size, double noise, Rng& rng) {
    Image img(size, size, 3);
    const int patch = size / kGrid;
    for (int y = 0; y < size; ++y) {
        const int gy = std::min(y / patch, kGrid - 1);
        for (int x = 0; x < size; ++x) {
            const int gx = std::min(x / patch, kGrid - 1);
            const auto& c = pc.colors[static_cast<std::size_t>(gy) * kGrid + gx];
            for (int ch = 0; ch < 3; ++ch) {
                img.at(y, x, ch) = std::clamp(c[ch] + rng.uniform(-noise, noise), 0.0, 1.0);
            }
        }
    }
    return img;
}

std::array<double, 3> pure_channel(double level, int channel) {
    std::array<double, 3> c = {0.05, 0.05, 0.05};
    c[channel] = level;
    return c;
}

std::array<double, 3> dark_color(Rng& rng) {
    const double base = 0.06;
    return {base + rng.uniform(0.0, 0.04), base + rng.uniform(0.0, 0.04),
            base + rng.uniform(0.0, 0.04)};
}

void shuffle(std::vector<int>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

/// Probe/mate color pair of the metric family: 4 shared bright patches,
/// 3 private bright patches per side, dark elsewhere.
void metric_pair_colors(Rng& rng, PatchColors& a, PatchColors& b) {
    enum Role { Shared, PrivateA, PrivateB, Dark };
    std::vector<int> roles(kGrid * kGrid, Dark);
    for (int i = 0; i < 4; ++i) roles[static_cast<std::size_t>(i)] = Shared;
    for (int i = 4; i < 7; ++i) roles[static_cast<std::size_t>(i)] = PrivateA;
    for (int i = 7; i < 10; ++i) roles[static_cast<std::size_t>(i)] = PrivateB;
    shuffle(roles, rng);

    for (std::size_t j = 0; j < roles.size(); ++j) {
        switch (roles[j]) {
        case Shared: {
            const int ch = static_cast<int>(rng.uniform_below(3));
            const double level = 0.85 + rng.uniform(-0.05, 0.05);
            a.colors[j] = pure_channel(level, ch);
            b.colors[j] = pure_channel(std::clamp(level + rng.uniform(-0.03, 0.03), 0.0, 1.0), ch);
            break;
        }
        case PrivateA:
            a.colors[j] = pure_channel(0.5 + rng.uniform(-0.05, 0.05),
                                       static_cast<int>(rng.uniform_below(3)));
            b.colors[j] = dark_color(rng);
            break;
        case PrivateB:
            a.colors[j] = dark_color(rng);
            b.colors[j] = pure_channel(0.5 + rng.uniform(-0.05, 0.05),
                                       static_cast<int>(rng.uniform_below(3)));
            break;
        default: {
            const auto d = dark_color(rng);
            a.colors[j] = d;
            b.colors[j] = {std::clamp(d[0] + rng.uniform(-0.01, 0.01), 0.0, 1.0),
                           std::clamp(d[1] + rng.uniform(-0.01, 0.01), 0.0, 1.0),
                           std::clamp(d[2] + rng.uniform(-0.01, 0.01), 0.0, 1.0)};
            break;
        }
        }
    }
}

double patch_radius(int gy, int gx, int size) {
    const int patch = size / kGrid;
    const double cy = (gy + 0.5) * patch - size / 2.0;
    const double cx = (gx + 0.5) * patch - size / 2.0;
    return std::hypot(cy, cx) / (size / 2.0 * std::sqrt(2.0));
}

std::array<double, 3> random_direction(Rng& rng) {
    std::array<double, 3> d = {rng.uniform(0.15, 1.0), rng.uniform(0.15, 1.0),
                               rng.uniform(0.15, 1.0)};
    const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    return {d[0] / n, d[1] / n, d[2] / n};
}

std::array<double, 3> radial_color(int gy, int gx, int size, Rng& rng) {
    const double b =
        std::clamp(0.95 - 0.72 * patch_radius(gy, gx, size) + rng.uniform(-0.04, 0.04), 0.05, 0.98);
    const auto dir = random_direction(rng);
    return {b * dir[0], b * dir[1], b * dir[2]};
}

} // namespace

Triplet make_metric_triplet(std::uint64_t seed, int size) {
    Rng rng(Rng::splitmix64(seed * 2654435761ULL + 17));
    PatchColors ca, cm;
    metric_pair_colors(rng, ca, cm);
    PatchColors cn, cn_unused;
    metric_pair_colors(rng, cn, cn_unused);

    Triplet t;
    t.probe = render(ca, size, 0.015, rng);
    t.mate = render(cm, size, 0.015, rng);
    t.nonmate = render(cn, size, 0.015, rng);
    return t;
}

std::pair<Image, Image> make_radial_pair(std::uint64_t seed, int size) {
    Rng rng(Rng::splitmix64(seed * 7046029254386353131ULL + 5));
    PatchColors ca, cb;
    for (int gy = 0; gy < kGrid; ++gy) {
        for (int gx = 0; gx < kGrid; ++gx) {
            const auto j = static_cast<std::size_t>(gy) * kGrid + gx;
            ca.colors[j] = radial_color(gy, gx, size, rng);
            const double scale = 1.0 + rng.uniform(-0.06, 0.06);
            cb.colors[j] = {std::clamp(ca.colors[j][0] * scale, 0.0, 1.0),
                            std::clamp(ca.colors[j][1] * scale, 0.0, 1.0),
                            std::clamp(ca.colors[j][2] * scale, 0.0, 1.0)};
        }
    }
    return {render(ca, size, 0.02, rng), render(cb, size, 0.02, rng)};
}

std::pair<Image, Image> make_halfshare_pair(std::uint64_t seed, int size) {
    Rng rng(Rng::splitmix64(seed * 9650029242287828579ULL + 11));
    PatchColors ca, cb;
    for (int gy = 0; gy < kGrid; ++gy) {
        for (int gx = 0; gx < kGrid; ++gx) {
            const auto j = static_cast<std::size_t>(gy) * kGrid + gx;
            ca.colors[j] = radial_color(gy, gx, size, rng);
            cb.colors[j] = ca.colors[j];
        }
    }
    // Right half of the second image is an independent draw.
    for (int gy = 0; gy < kGrid; ++gy) {
        for (int gx = kGrid / 2; gx < kGrid; ++gx) {
            cb.colors[static_cast<std::size_t>(gy) * kGrid + gx] =
                radial_color(gy, gx, size, rng);
        }
    }
    return {render(ca, size, 0.02, rng), render(cb, size, 0.02, rng)};
}

std::pair<Image, Image> make_checker_pair(std::uint64_t seed, int size) {
    Rng rng(Rng::splitmix64(seed * 1099511628211ULL + 29));
    std::vector<int> idx(kGrid * kGrid);
    std::iota(idx.begin(), idx.end(), 0);
    shuffle(idx, rng);

    // Half the patches carry signal at two brightness levels; spreading the
    // signal keeps map comparisons well-conditioned.
    std::array<double, kGrid * kGrid> level{};
    level.fill(0.08);
    for (int i = 0; i < 8; ++i) {
        level[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] =
            (i % 2 == 0) ? 0.45 : 0.33;
    }

    const int patch = size / kGrid;
    Image probe(size, size, 3);
    Image mate(size, size, 3);
    for (int y = 0; y < size; ++y) {
        const int gy = std::min(y / patch, kGrid - 1);
        for (int x = 0; x < size; ++x) {
            const int gx = std::min(x / patch, kGrid - 1);
            const double lv = 2.0 * level[static_cast<std::size_t>(gy) * kGrid + gx];
            const bool even = ((y + x) % 2) == 0;
            for (int ch = 0; ch < 3; ++ch) {
                probe.at(y, x, ch) = even ? lv : 0.0;
                mate.at(y, x, ch) = even ? 0.0 : lv;
            }
        }
    }
    return {probe, mate};
}

} // namespace fixtures
} // namespace srise
