#include "srise/embedding.hpp"

#include <algorithm>
#include <cmath>

namespace srise {

void Embedder::check_input(const Image& img) const {
    if (img.height != input_height() || img.width != input_width() ||
        img.channels != input_channels()) {
        throw DimensionError(name() + " expects " + std::to_string(input_height()) + "x" +
                             std::to_string(input_width()) + "x" +
                             std::to_string(input_channels()) + ", got " +
                             std::to_string(img.height) + "x" + std::to_string(img.width) + "x" +
                             std::to_string(img.channels));
    }
}

std::optional<double> try_cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("embedding dimensions differ: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    const double norm_a = std::sqrt(na);
    const double norm_b = std::sqrt(nb);
    if (norm_a < 1e-12 || norm_b < 1e-12) return std::nullopt;
    return std::clamp(dot / (norm_a * norm_b), -1.0, 1.0);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    const auto s = try_cosine_similarity(a, b);
    if (!s) throw DegenerateEmbeddingError("embedding norm below 1e-12 in cosine similarity");
    return *s;
}

PatchMeanEmbedder::PatchMeanEmbedder(int grid, int height, int width, int channels)
    : grid_(grid), height_(height), width_(width), channels_(channels) {
    if (grid < 1) throw ConfigError("patch grid must be >= 1");
    if (height < grid || width < grid) {
        throw ConfigError("patch grid " + std::to_string(grid) + " too fine for " +
                          std::to_string(height) + "x" + std::to_string(width));
    }
}

std::string PatchMeanEmbedder::name() const {
    return "patch-mean-" + std::to_string(grid_);
}

Embedding PatchMeanEmbedder::embed(const Image& img) const {
    check_input(img);
    Embedding e;
    e.values.assign(static_cast<std::size_t>(grid_) * grid_ * channels_, 0.0);

    // Patch boundaries floor(i*extent/grid), so uneven extents stay covered.
    for (int gy = 0; gy < grid_; ++gy) {
        const int y0 = gy * height_ / grid_;
        const int y1 = (gy + 1) * height_ / grid_;
        for (int gx = 0; gx < grid_; ++gx) {
            const int x0 = gx * width_ / grid_;
            const int x1 = (gx + 1) * width_ / grid_;
            const double inv = 1.0 / (static_cast<double>(y1 - y0) * (x1 - x0));
            for (int c = 0; c < channels_; ++c) {
                double sum = 0.0;
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) {
                        sum += img.at(y, x, c);
                    }
                }
                e.values[(static_cast<std::size_t>(gy) * grid_ + gx) * channels_ + c] = sum * inv;
            }
        }
    }
    return e;
}

RandomProjectionEmbedder::RandomProjectionEmbedder(int dim, std::uint64_t seed, int height,
                                                   int width, int channels)
    : dim_(dim), height_(height), width_(width), channels_(channels), seed_(seed) {
    if (dim < 1) throw ConfigError("projection dim must be >= 1");
    Rng rng(seed);
    projection_.resize(static_cast<std::size_t>(dim) * height * width * channels);
    for (double& v : projection_) {
        v = rng.normal();
    }
}

std::string RandomProjectionEmbedder::name() const {
    return "random-projection-" + std::to_string(dim_);
}

Embedding RandomProjectionEmbedder::embed(const Image& img) const {
    check_input(img);
    const std::size_t n = img.data.size();
    Embedding e;
    e.values.resize(static_cast<std::size_t>(dim_));
    for (int d = 0; d < dim_; ++d) {
        const double* row = projection_.data() + static_cast<std::size_t>(d) * n;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += row[i] * img.data[i];
        }
        e.values[static_cast<std::size_t>(d)] = std::tanh(acc);
    }
    return e;
}

} // namespace srise
