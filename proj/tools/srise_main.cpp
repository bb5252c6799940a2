// srise: saliency-map explanations for similarity models, with
// deletion/insertion evaluation and a parameter-randomization sanity check.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unistd.h>

#include "srise/config.hpp"
#include "srise/fixtures.hpp"
#include "srise/image_io.hpp"
#include "srise/overlay.hpp"
#include "srise/parallel.hpp"
#include "srise/serialize.hpp"

namespace fs = std::filesystem;
using namespace srise;

namespace {

bool use_color() {
    static const bool enabled = isatty(fileno(stderr)) && std::getenv("SRISE_NO_COLOR") == nullptr;
    return enabled;
}

void log_info(const std::string& msg) {
    if (use_color()) {
        std::cerr << "\033[32m[srise]\033[0m " << msg << "\n";
    } else {
        std::cerr << "[srise] " << msg << "\n";
    }
}

void log_error(const std::string& msg) {
    if (use_color()) {
        std::cerr << "\033[31m[srise error]\033[0m " << msg << "\n";
    } else {
        std::cerr << "[srise error] " << msg << "\n";
    }
}

/// Options shared by the subcommands; only values the user actually passed
/// override the config file.
struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    std::vector<int> masks;
    int kernels = 0;
    int kernel_size = 0;
    double sigma = 0.0;
    double threshold = 0.0;
    int step = 0;
    int workers = 0;
    std::string out_dir;
    std::string embedder;
    std::string model;
    int patch_grid = 0;
    int image_size = 0;
    double margin = 0.0;

    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_masks = nullptr;
    CLI::Option* opt_kernels = nullptr;
    CLI::Option* opt_kernel_size = nullptr;
    CLI::Option* opt_sigma = nullptr;
    CLI::Option* opt_threshold = nullptr;
    CLI::Option* opt_step = nullptr;
    CLI::Option* opt_workers = nullptr;
    CLI::Option* opt_out = nullptr;
    CLI::Option* opt_embedder = nullptr;
    CLI::Option* opt_model = nullptr;
    CLI::Option* opt_patch_grid = nullptr;
    CLI::Option* opt_image_size = nullptr;
    CLI::Option* opt_margin = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Flat key = value config file");
        opt_seed = cmd->add_option("--seed", seed, "Master seed for every random draw");
        opt_masks = cmd->add_option("--masks", masks,
                                    "Mask count N (eval accepts a list)")
                        ->delimiter(',');
        opt_kernels = cmd->add_option("--kernels", kernels, "Gaussian kernels per mask");
        opt_kernel_size = cmd->add_option("--kernel-size", kernel_size, "Kernel size s (odd)");
        opt_sigma = cmd->add_option("--sigma", sigma, "Kernel sigma (default s/4)");
        opt_threshold = cmd->add_option("--threshold", threshold, "Similarity threshold");
        opt_step = cmd->add_option("--step", step, "Pixels per metric re-evaluation");
        opt_workers = cmd->add_option("--workers", workers, "Worker thread cap");
        opt_out = cmd->add_option("--out", out_dir, "Output directory");
        opt_embedder = cmd->add_option("--embedder", embedder,
                                       "patch-mean | random-projection | randomized | external");
        opt_model = cmd->add_option("--model", model, "ONNX model path (implies external)");
        opt_patch_grid = cmd->add_option("--patch-grid", patch_grid, "Patch-mean grid");
        opt_image_size = cmd->add_option("--image-size", image_size, "Working image size");
        opt_margin = cmd->add_option("--margin", margin, "Sanity pass margin");
    }

    RunConfig build() const {
        RunConfig rc;
        if (!config_path.empty()) apply_config_file(rc, config_path);
        if (opt_seed->count()) rc.seed = seed;
        if (opt_masks->count()) {
            if (masks.empty()) throw ConfigError("--masks needs at least one value");
            rc.eval_mask_counts = masks;
            rc.explain.mask_cfg.num_masks = masks.front();
        }
        if (opt_kernels->count()) rc.explain.mask_cfg.kernels_per_mask = kernels;
        if (opt_kernel_size->count()) {
            rc.explain.mask_cfg.kernel_size = kernel_size;
            rc.explain.mask_cfg.sigma = kernel_size / 4.0;
        }
        if (opt_sigma->count()) rc.explain.mask_cfg.sigma = sigma;
        if (opt_threshold->count()) rc.metric.threshold = threshold;
        if (opt_step->count()) rc.metric.step = step;
        if (opt_workers->count()) rc.explain.workers = workers;
        if (opt_out->count()) rc.out_dir = out_dir;
        if (opt_embedder->count()) rc.embedder = embedder;
        if (opt_model->count()) {
            rc.model_path = model;
            rc.embedder = "external";
        }
        if (opt_patch_grid->count()) rc.patch_grid = patch_grid;
        if (opt_image_size->count()) rc.image_size = image_size;
        if (opt_margin->count()) rc.sanity.margin = margin;
        rc.explain.mask_cfg.seed = rc.seed;
        return rc;
    }
};

// Seed-stream ids, so adding a consumer never shifts another one's draws.
constexpr std::uint64_t kStreamExplain = 1;
constexpr std::uint64_t kStreamEmbedder = 2;
constexpr std::uint64_t kStreamSanity = 3;
constexpr std::uint64_t kStreamEvalBase = 1000;

void ensure_out_dir(const RunConfig& rc) {
    std::error_code ec;
    fs::create_directories(rc.out_dir, ec);
    if (ec) throw InputError("cannot create output directory: " + rc.out_dir);
}

void export_map(const SaliencyMap& map, const fs::path& dir, const std::string& stem) {
    save_map_csv(map, (dir / (stem + ".csv")).string());
    save_map_binary(map, (dir / (stem + ".bin")).string());
}

void dump_mask_batch(const RunConfig& rc, int height, int width, const fs::path& dir) {
    if (rc.dump_masks <= 0) return;
    Rng rng = Rng(rc.seed).derive(kStreamExplain);
    MaskConfig cfg = rc.explain.mask_cfg;
    cfg.num_masks = std::min(cfg.num_masks, rc.dump_masks);
    const auto batch = generate_mask_batch(height, width, cfg, rng);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        Image gray(height, width, 1);
        gray.data = batch[i].values;
        save_png(gray, (dir / ("mask_" + std::to_string(i) + ".png")).string());
    }
}

int cmd_explain(const std::string& path_a, const std::string& path_b, const RunConfig& rc) {
    ensure_out_dir(rc);
    const Image a = load_image(path_a, rc.image_size, rc.image_size);
    const Image b = load_image(path_b, rc.image_size, rc.image_size);

    Rng master(rc.seed);
    Rng embed_rng = master.derive(kStreamEmbedder);
    const auto embedder = make_embedder(rc, embed_rng);
    Rng rng = master.derive(kStreamExplain);

    const PairExplanation exp = explain_pair(a, b, *embedder, rc.explain, rng);

    const fs::path dir(rc.out_dir);
    export_map(exp.map_a, dir, "map_a");
    export_map(exp.map_b, dir, "map_b");
    save_png(render_overlay(a, exp.map_a, rc.overlay_alpha), (dir / "overlay_a.png").string());
    save_png(render_overlay(b, exp.map_b, rc.overlay_alpha), (dir / "overlay_b.png").string());
    write_text_file((dir / "explanation.json").string(), to_json(exp));
    dump_mask_batch(rc, a.height, a.width, dir);

    log_info("explain: base similarity " + std::to_string(exp.base_similarity) + ", outputs in " +
             rc.out_dir);
    return 0;
}

int cmd_triplet(const std::string& probe_path, const std::string& mate_path,
                const std::string& nonmate_path, const RunConfig& rc) {
    ensure_out_dir(rc);
    Triplet t;
    t.probe = load_image(probe_path, rc.image_size, rc.image_size);
    t.mate = load_image(mate_path, rc.image_size, rc.image_size);
    t.nonmate = load_image(nonmate_path, rc.image_size, rc.image_size);

    Rng master(rc.seed);
    Rng embed_rng = master.derive(kStreamEmbedder);
    const auto embedder = make_embedder(rc, embed_rng);
    Rng rng = master.derive(kStreamExplain);

    const TripletExplanation exp = explain_triplet(t, *embedder, rc.explain, rng);

    const fs::path dir(rc.out_dir);
    export_map(exp.match.map_a, dir, "map_match_probe");
    export_map(exp.match.map_b, dir, "map_match_mate");
    export_map(exp.nonmatch.map_a, dir, "map_nonmatch_probe");
    export_map(exp.nonmatch.map_b, dir, "map_nonmatch_nonmate");

    // Rendered maps carry the pair weight, so the non-matching overlays dim
    // with the similarity gap.
    const auto overlay = [&](const Image& img, const SaliencyMap& map, double w,
                             const std::string& name) {
        save_png(render_overlay(img, weighted_map(map, w), rc.overlay_alpha),
                 (dir / name).string());
    };
    overlay(t.probe, exp.match.map_a, exp.weight_match, "overlay_match_probe.png");
    overlay(t.mate, exp.match.map_b, exp.weight_match, "overlay_match_mate.png");
    overlay(t.probe, exp.nonmatch.map_a, exp.weight_nonmatch, "overlay_nonmatch_probe.png");
    overlay(t.nonmate, exp.nonmatch.map_b, exp.weight_nonmatch, "overlay_nonmatch_nonmate.png");
    write_text_file((dir / "triplet.json").string(), to_json(exp));

    log_info("triplet: weights match=" + std::to_string(exp.weight_match) +
             " nonmatch=" + std::to_string(exp.weight_nonmatch) + ", outputs in " + rc.out_dir);
    return 0;
}

struct TripletDirs {
    std::string id;
    fs::path probe, mate, nonmate;
};

fs::path find_role_image(const fs::path& dir, const std::string& role) {
    for (const char* ext : {".png", ".jpg", ".jpeg"}) {
        const fs::path p = dir / (role + ext);
        if (fs::exists(p)) return p;
    }
    throw InputError("dataset folder " + dir.string() + " is missing " + role + ".png");
}

std::vector<TripletDirs> discover_dataset(const std::string& root) {
    if (!fs::is_directory(root)) throw InputError("dataset directory not found: " + root);
    std::vector<TripletDirs> out;
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& dir : subdirs) {
        TripletDirs td;
        td.id = dir.filename().string();
        td.probe = find_role_image(dir, "probe");
        td.mate = find_role_image(dir, "mate");
        td.nonmate = find_role_image(dir, "nonmate");
        out.push_back(std::move(td));
    }
    if (out.empty()) throw InputError("dataset has no triplet folders: " + root);
    return out;
}

int cmd_eval(const std::string& dataset_dir, const RunConfig& rc) {
    ensure_out_dir(rc);
    const auto triplets = discover_dataset(dataset_dir);
    log_info("eval: " + std::to_string(triplets.size()) + " triplets, N in {" +
             [&] {
                 std::string s;
                 for (std::size_t i = 0; i < rc.eval_mask_counts.size(); ++i) {
                     if (i) s += ",";
                     s += std::to_string(rc.eval_mask_counts[i]);
                 }
                 return s;
             }() +
             "}");

    struct Loaded {
        std::string id;
        Image probe, mate;
    };
    std::vector<Loaded> data;
    data.reserve(triplets.size());
    for (const auto& td : triplets) {
        data.push_back({td.id, load_image(td.probe.string(), rc.image_size, rc.image_size),
                        load_image(td.mate.string(), rc.image_size, rc.image_size)});
    }

    Rng master(rc.seed);
    Rng embed_rng = master.derive(kStreamEmbedder);
    const auto embedder = make_embedder(rc, embed_rng);

    const fs::path dir(rc.out_dir);
    std::vector<TableRow> table;
    for (const int n : rc.eval_mask_counts) {
        ExplainConfig ecfg = rc.explain;
        ecfg.mask_cfg.num_masks = n;

        // The matching pair of each triplet is explained and its probe map
        // evaluated; each triplet gets its own derived seed stream so results
        // do not depend on scheduling.
        std::vector<PairSample> samples(data.size());
        parallel_chunks(rc.explain.workers, static_cast<std::int64_t>(data.size()),
                        [&](std::int64_t begin, std::int64_t end) {
                            ExplainConfig worker_cfg = ecfg;
                            worker_cfg.workers = 1;
                            for (std::int64_t i = begin; i < end; ++i) {
                                const auto& item = data[static_cast<std::size_t>(i)];
                                Rng rng = master.derive(kStreamEvalBase +
                                                        static_cast<std::uint64_t>(n) * 100000 +
                                                        static_cast<std::uint64_t>(i));
                                const auto exp =
                                    explain_pair(item.probe, item.mate, *embedder, worker_cfg, rng);
                                auto& s = samples[static_cast<std::size_t>(i)];
                                s.id = item.id;
                                s.target = item.probe;
                                s.other = item.mate;
                                s.map = exp.map_a;
                            }
                        });

        const DatasetReport report =
            evaluate_dataset(samples, *embedder, rc.metric, rc.explain.workers);
        write_text_file((dir / ("report_N" + std::to_string(n) + ".json")).string(),
                        to_json(report));
        write_text_file((dir / ("report_N" + std::to_string(n) + ".csv")).string(),
                        dataset_report_csv(report));
        if (rc.dump_curves) {
            const fs::path cdir = dir / ("curves_N" + std::to_string(n));
            fs::create_directories(cdir);
            for (const auto& row : report.rows) {
                write_text_file((cdir / (row.id + "_deletion.csv")).string(), curve_csv(row.del));
                write_text_file((cdir / (row.id + "_insertion.csv")).string(), curve_csv(row.ins));
            }
        }
        table.push_back(
            {"S-RISE", n, report.mean_deletion, report.mean_insertion, report.average});
        log_info("eval N=" + std::to_string(n) + ": deletion " +
                 std::to_string(report.mean_deletion) + ", insertion " +
                 std::to_string(report.mean_insertion));
    }
    write_text_file((dir / "table.csv").string(), table_csv(table));
    return 0;
}

int cmd_sanity(const std::string& path_a, const std::string& path_b, const RunConfig& rc) {
    ensure_out_dir(rc);
    const Image a = load_image(path_a, rc.image_size, rc.image_size);
    const Image b = load_image(path_b, rc.image_size, rc.image_size);

    Rng master(rc.seed);
    Rng embed_rng = master.derive(kStreamEmbedder);
    const auto embedder = make_embedder(rc, embed_rng);
    Rng rng = master.derive(kStreamSanity);

    SanityMaps maps;
    const SanityReport report =
        randomization_check(a, b, *embedder, rc.explain, rc.sanity, rng, &maps);

    const fs::path dir(rc.out_dir);
    write_text_file((dir / "sanity.json").string(), to_json(report));

    // Strip: trained map (seed 1) | trained map (seed 2) | randomized map.
    const Image o1 = render_overlay(a, maps.trained1, rc.overlay_alpha);
    const Image o2 = render_overlay(a, maps.trained2, rc.overlay_alpha);
    const Image o3 = render_overlay(a, maps.randomized, rc.overlay_alpha);
    Image strip(a.height, a.width * 3, 3);
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                strip.at(y, x, c) = o1.at(y, x, c);
                strip.at(y, x + a.width, c) = o2.at(y, x, c);
                strip.at(y, x + 2 * a.width, c) = o3.at(y, x, c);
            }
        }
    }
    save_png(strip, (dir / "sanity_strip.png").string());

    log_info("sanity: r_rerun " + std::to_string(report.r_rerun) + ", r_randomized " +
             std::to_string(report.r_randomized) + " -> " +
             (report.passed ? "passed" : "FAILED"));
    return report.passed ? 0 : 1;
}

int cmd_gen_fixtures(int count, const RunConfig& rc) {
    if (count < 1) throw ConfigError("--triplets must be >= 1");
    ensure_out_dir(rc);
    const fs::path dir(rc.out_dir);
    for (int i = 0; i < count; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "triplet_%03d", i);
        const fs::path tdir = dir / name;
        fs::create_directories(tdir);
        const Triplet t =
            fixtures::make_metric_triplet(rc.seed + static_cast<std::uint64_t>(i), rc.image_size);
        save_png(t.probe, (tdir / "probe.png").string());
        save_png(t.mate, (tdir / "mate.png").string());
        save_png(t.nonmate, (tdir / "nonmate.png").string());
    }
    log_info("gen-fixtures: wrote " + std::to_string(count) + " triplets to " + rc.out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-RISE saliency explanations for similarity models"};
    app.require_subcommand(1);

    std::string in_a, in_b, in_c, dataset_dir;
    int fixture_count = 20;

    auto* explain = app.add_subcommand("explain", "Explain one image pair");
    explain->add_option("image_a", in_a, "First image")->required();
    explain->add_option("image_b", in_b, "Second image")->required();
    CommonFlags explain_flags;
    explain_flags.attach(explain);

    auto* triplet = app.add_subcommand("triplet", "Explain a probe/mate/nonmate triplet");
    triplet->add_option("probe", in_a, "Probe image")->required();
    triplet->add_option("mate", in_b, "Mate image")->required();
    triplet->add_option("nonmate", in_c, "Nonmate image")->required();
    CommonFlags triplet_flags;
    triplet_flags.attach(triplet);

    auto* eval = app.add_subcommand("eval", "Deletion/Insertion evaluation over a triplet dataset");
    eval->add_option("dataset", dataset_dir, "Directory of triplet folders")->required();
    CommonFlags eval_flags;
    eval_flags.attach(eval);

    auto* sanity = app.add_subcommand("sanity", "Model-parameter-randomization check");
    sanity->add_option("image_a", in_a, "First image")->required();
    sanity->add_option("image_b", in_b, "Second image")->required();
    CommonFlags sanity_flags;
    sanity_flags.attach(sanity);

    auto* gen = app.add_subcommand("gen-fixtures", "Write a synthetic triplet dataset");
    gen->add_option("--triplets", fixture_count, "Number of triplets");
    CommonFlags gen_flags;
    gen_flags.attach(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (explain->parsed()) return cmd_explain(in_a, in_b, explain_flags.build());
        if (triplet->parsed()) return cmd_triplet(in_a, in_b, in_c, triplet_flags.build());
        if (eval->parsed()) return cmd_eval(dataset_dir, eval_flags.build());
        if (sanity->parsed()) return cmd_sanity(in_a, in_b, sanity_flags.build());
        if (gen->parsed()) return cmd_gen_fixtures(fixture_count, gen_flags.build());
    } catch (const ConfigError& e) {
        log_error(e.what());
        return 2;
    } catch (const InputError& e) {
        log_error(e.what());
        return 2;
    } catch (const DecodeError& e) {
        log_error(e.what());
        return 2;
    } catch (const Error& e) {
        log_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        log_error(e.what());
        return 1;
    }
    return 0;
}
