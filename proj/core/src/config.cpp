#include "srise/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace srise {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& path, const std::string& key,
                            const std::string& value) {
    throw ConfigError(path + ": bad value '" + value + "' for key '" + key + "'");
}

double parse_double(const std::string& path, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) bad_value(path, key, v);
        return d;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        bad_value(path, key, v);
    }
}

std::int64_t parse_int(const std::string& path, const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(path, key, v);
    return out;
}

std::uint64_t parse_u64(const std::string& path, const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(path, key, v);
    return out;
}

bool parse_bool(const std::string& path, const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(path, key, v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

} // namespace

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);

    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    const auto kv = read_key_value_file(path);
    for (const auto& [key, value] : kv) {
        if (key == "masks") {
            const auto parts = split(value, ',');
            if (parts.empty()) bad_value(path, key, value);
            cfg.eval_mask_counts.clear();
            for (const auto& p : parts) {
                cfg.eval_mask_counts.push_back(static_cast<int>(parse_int(path, key, p)));
            }
            cfg.explain.mask_cfg.num_masks = cfg.eval_mask_counts.front();
        } else if (key == "kernels") {
            cfg.explain.mask_cfg.kernels_per_mask = static_cast<int>(parse_int(path, key, value));
        } else if (key == "kernel-size") {
            cfg.explain.mask_cfg.kernel_size = static_cast<int>(parse_int(path, key, value));
            cfg.explain.mask_cfg.sigma = cfg.explain.mask_cfg.kernel_size / 4.0;
        } else if (key == "sigma") {
            cfg.explain.mask_cfg.sigma = parse_double(path, key, value);
        } else if (key == "amplitude") {
            cfg.explain.mask_cfg.amplitude = parse_double(path, key, value);
        } else if (key == "merge") {
            if (value == "max") cfg.explain.mask_cfg.merge = MergeMode::Max;
            else if (value == "sum-clip") cfg.explain.mask_cfg.merge = MergeMode::SumClip;
            else bad_value(path, key, value);
        } else if (key == "normalize") {
            cfg.explain.normalize = parse_bool(path, key, value);
        } else if (key == "reweight") {
            if (value == "ratio") cfg.explain.reweight = ReweightMode::Ratio;
            else if (value == "none") cfg.explain.reweight = ReweightMode::None;
            else bad_value(path, key, value);
        } else if (key == "shared-masks") {
            cfg.explain.shared_masks = parse_bool(path, key, value);
        } else if (key == "workers") {
            cfg.explain.workers = static_cast<int>(parse_int(path, key, value));
        } else if (key == "seed") {
            cfg.seed = parse_u64(path, key, value);
        } else if (key == "threshold") {
            cfg.metric.threshold = parse_double(path, key, value);
        } else if (key == "step") {
            cfg.metric.step = static_cast<int>(parse_int(path, key, value));
        } else if (key == "max-fraction") {
            cfg.metric.max_fraction = parse_double(path, key, value);
        } else if (key == "margin") {
            cfg.sanity.margin = parse_double(path, key, value);
        } else if (key == "randomized-dim") {
            cfg.sanity.randomized_dim = static_cast<int>(parse_int(path, key, value));
        } else if (key == "embedder") {
            cfg.embedder = value;
        } else if (key == "patch-grid") {
            cfg.patch_grid = static_cast<int>(parse_int(path, key, value));
        } else if (key == "proj-dim") {
            cfg.proj_dim = static_cast<int>(parse_int(path, key, value));
        } else if (key == "model") {
            cfg.model_path = value;
            cfg.embedder = "external";
        } else if (key == "model-layout") {
            if (value == "chw") cfg.layout.order = TensorLayout::Order::CHW;
            else if (value == "hwc") cfg.layout.order = TensorLayout::Order::HWC;
            else bad_value(path, key, value);
        } else if (key == "model-mean" || key == "model-std") {
            const auto parts = split(value, ',');
            if (parts.size() != 3) bad_value(path, key, value);
            auto& dst = key == "model-mean" ? cfg.layout.mean : cfg.layout.stddev;
            for (int i = 0; i < 3; ++i) {
                dst[static_cast<std::size_t>(i)] = parse_double(path, key, parts[static_cast<std::size_t>(i)]);
            }
        } else if (key == "image-size") {
            cfg.image_size = static_cast<int>(parse_int(path, key, value));
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "overlay-alpha") {
            cfg.overlay_alpha = parse_double(path, key, value);
        } else if (key == "dump-curves") {
            cfg.dump_curves = parse_bool(path, key, value);
        } else if (key == "dump-masks") {
            cfg.dump_masks = static_cast<int>(parse_int(path, key, value));
        } else {
            throw ConfigError(path + ": unknown config key '" + key + "'");
        }
    }
}

std::unique_ptr<Embedder> make_embedder(const RunConfig& cfg, Rng& rng) {
    const int hw = cfg.image_size;
    if (cfg.embedder == "patch-mean") {
        return std::make_unique<PatchMeanEmbedder>(cfg.patch_grid, hw, hw, 3);
    }
    if (cfg.embedder == "random-projection") {
        return std::make_unique<RandomProjectionEmbedder>(cfg.proj_dim, cfg.seed, hw, hw, 3);
    }
    if (cfg.embedder == "randomized") {
        return std::make_unique<RandomizedEmbedder>(cfg.proj_dim, rng.next_u64(), hw, hw, 3);
    }
    if (cfg.embedder == "external") {
        if (cfg.model_path.empty()) {
            throw ConfigError("embedder 'external' requires a model path (--model or model=)");
        }
        return std::make_unique<ExternalModelEmbedder>(cfg.model_path, cfg.layout, hw, hw, 3);
    }
    throw ConfigError("unknown embedder '" + cfg.embedder +
                      "' (expected patch-mean, random-projection, randomized, or external)");
}

} // namespace srise
