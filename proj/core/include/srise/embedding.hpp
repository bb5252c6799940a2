#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srise/image.hpp"
#include "srise/rng.hpp"

namespace srise {

/// D-dimensional feature vector produced by an Embedder.
struct Embedding {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

/// The black-box model boundary: anything that maps an Image to a feature
/// vector. Implementations must be deterministic (same image, same output)
/// and keep the output dimension constant.
class Embedder {
public:
    virtual ~Embedder() = default;

    virtual std::string name() const = 0;
    virtual int input_height() const = 0;
    virtual int input_width() const = 0;
    virtual int input_channels() const = 0;

    /// True when embed() may be called from several threads at once.
    /// The explainer serializes calls for embedders that return false.
    virtual bool concurrent_safe() const { return true; }

    /// Throws DimensionError when img does not match the expected input,
    /// InferenceError when a model backend fails.
    virtual Embedding embed(const Image& img) const = 0;

protected:
    void check_input(const Image& img) const;
};

/// cos(a,b) = dot / (|a| |b|), clamped to [-1,1] against rounding.
/// Throws DegenerateEmbeddingError when either norm is below 1e-12.
double cosine_similarity(const Embedding& a, const Embedding& b);

/// Non-throwing variant; nullopt instead of the degenerate-embedding error.
std::optional<double> try_cosine_similarity(const Embedding& a, const Embedding& b);

/// Splits the image into a grid x grid array of equal patches; the embedding
/// is the per-patch, per-channel mean intensity, patch-major then channel:
/// D = grid^2 * channels. Exists so saliency ground truth stays analytically
/// computable without trained weights.
class PatchMeanEmbedder : public Embedder {
public:
    PatchMeanEmbedder(int grid, int height, int width, int channels);

    std::string name() const override;
    int input_height() const override { return height_; }
    int input_width() const override { return width_; }
    int input_channels() const override { return channels_; }
    int grid() const { return grid_; }
    Embedding embed(const Image& img) const override;

private:
    int grid_, height_, width_, channels_;
};

/// embed(img) = tanh(P * flatten(img)) for a fixed seeded dim x (H*W*C)
/// matrix P with unit-normal entries (row-major generation order).
class RandomProjectionEmbedder : public Embedder {
public:
    RandomProjectionEmbedder(int dim, std::uint64_t seed, int height, int width, int channels);

    std::string name() const override;
    int input_height() const override { return height_; }
    int input_width() const override { return width_; }
    int input_channels() const override { return channels_; }
    int dim() const { return dim_; }
    std::uint64_t projection_seed() const { return seed_; }
    Embedding embed(const Image& img) const override;

private:
    int dim_, height_, width_, channels_;
    std::uint64_t seed_;
    std::vector<double> projection_; // dim x (H*W*C), row-major
};

/// A RandomProjectionEmbedder with a construction-time random seed; stands in
/// for a model with randomized parameters in the sanity check. The seed is
/// drawn from the caller's stream so seeded runs stay reproducible.
class RandomizedEmbedder : public RandomProjectionEmbedder {
public:
    RandomizedEmbedder(int dim, std::uint64_t construction_seed,
                       int height, int width, int channels)
        : RandomProjectionEmbedder(dim, construction_seed, height, width, channels) {}

    static RandomizedEmbedder from_stream(int dim, Rng& rng,
                                          int height, int width, int channels) {
        return RandomizedEmbedder(dim, rng.next_u64(), height, width, channels);
    }

    std::string name() const override { return "randomized"; }
};

} // namespace srise
