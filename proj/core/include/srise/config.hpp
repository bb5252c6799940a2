#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srise/evaluation.hpp"
#include "srise/explainer.hpp"
#include "srise/onnx_embedder.hpp"
#include "srise/sanity.hpp"

namespace srise {

/// Everything one toolkit run needs, assembled from defaults, an optional
/// flat key-value config file, and command-line flags (flags win).
struct RunConfig {
    ExplainConfig explain;
    MetricConfig metric;
    SanityConfig sanity;

    std::string embedder = "patch-mean"; // patch-mean | random-projection | randomized | external
    int patch_grid = 4;
    int proj_dim = 64;
    std::string model_path;
    TensorLayout layout;

    int image_size = 112;
    std::uint64_t seed = 42;
    std::string out_dir = "srise-out";
    std::vector<int> eval_mask_counts = {10, 100, 500, 1000};
    double overlay_alpha = 0.5;
    bool dump_curves = false;
    int dump_masks = 0; // how many masks of the batch to export as PNGs
};

/// Parse the flat `key = value` config grammar: one pair per line, '#' starts
/// a comment, blank lines ignored. Unknown keys, bad values, or an unreadable
/// file raise ConfigError naming the file (and line).
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Apply a parsed config file onto `cfg`. Keys are documented in the README.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Build the embedder described by cfg (throws ConfigError for unknown names).
/// `rng` supplies the construction seed of the `randomized` embedder.
std::unique_ptr<Embedder> make_embedder(const RunConfig& cfg, Rng& rng);

} // namespace srise
