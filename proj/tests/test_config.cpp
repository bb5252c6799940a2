#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "srise/config.hpp"

using namespace srise;

namespace {

std::filesystem::path write_config(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("srise_cfg_" + name + ".conf");
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST_CASE("config file grammar") {
    SUBCASE("full key set with comments and blank lines") {
        const auto path = write_config("full", R"(# experiment record
masks = 500
kernels = 4
kernel-size = 21
sigma = 6.5
amplitude = 0.9
merge = sum-clip
normalize = false
reweight = none
shared-masks = true
workers = 3

seed = 777
threshold = 0.42   # decision cutoff
step = 5
max-fraction = 0.8
margin = 0.25
randomized-dim = 48
embedder = random-projection
patch-grid = 8
proj-dim = 96
image-size = 96
out = /tmp/srise-run
overlay-alpha = 0.7
dump-curves = true
dump-masks = 4
)");
        RunConfig rc;
        apply_config_file(rc, path.string());
        CHECK(rc.eval_mask_counts == std::vector<int>{500});
        CHECK(rc.explain.mask_cfg.num_masks == 500);
        CHECK(rc.explain.mask_cfg.kernels_per_mask == 4);
        CHECK(rc.explain.mask_cfg.kernel_size == 21);
        CHECK(rc.explain.mask_cfg.sigma == 6.5);
        CHECK(rc.explain.mask_cfg.amplitude == 0.9);
        CHECK(rc.explain.mask_cfg.merge == MergeMode::SumClip);
        CHECK(!rc.explain.normalize);
        CHECK(rc.explain.reweight == ReweightMode::None);
        CHECK(rc.explain.shared_masks);
        CHECK(rc.explain.workers == 3);
        CHECK(rc.seed == 777);
        CHECK(rc.metric.threshold == 0.42);
        CHECK(rc.metric.step == 5);
        CHECK(rc.metric.max_fraction == 0.8);
        CHECK(rc.sanity.margin == 0.25);
        CHECK(rc.sanity.randomized_dim == 48);
        CHECK(rc.embedder == "random-projection");
        CHECK(rc.patch_grid == 8);
        CHECK(rc.proj_dim == 96);
        CHECK(rc.image_size == 96);
        CHECK(rc.out_dir == "/tmp/srise-run");
        CHECK(rc.overlay_alpha == 0.7);
        CHECK(rc.dump_curves);
        CHECK(rc.dump_masks == 4);
        std::filesystem::remove(path);
    }
    SUBCASE("masks accepts a comma list for eval") {
        const auto path = write_config("list", "masks = 10, 100, 500, 1000\n");
        RunConfig rc;
        apply_config_file(rc, path.string());
        CHECK(rc.eval_mask_counts == std::vector<int>{10, 100, 500, 1000});
        CHECK(rc.explain.mask_cfg.num_masks == 10);
        std::filesystem::remove(path);
    }
    SUBCASE("kernel-size rescales the default sigma; an explicit sigma wins") {
        const auto p1 = write_config("sig1", "kernel-size = 13\n");
        RunConfig r1;
        apply_config_file(r1, p1.string());
        CHECK(r1.explain.mask_cfg.sigma == 13.0 / 4.0);
        std::filesystem::remove(p1);

        const auto p2 = write_config("sig2", "kernel-size = 13\nsigma = 2.0\n");
        RunConfig r2;
        apply_config_file(r2, p2.string());
        CHECK(r2.explain.mask_cfg.sigma == 2.0);
        std::filesystem::remove(p2);
    }
    SUBCASE("model path flips the embedder to external") {
        const auto path = write_config("model",
                                       "model = /models/fr.onnx\nmodel-layout = hwc\n"
                                       "model-mean = 0.5,0.5,0.5\nmodel-std = 0.3,0.3,0.3\n");
        RunConfig rc;
        apply_config_file(rc, path.string());
        CHECK(rc.embedder == "external");
        CHECK(rc.model_path == "/models/fr.onnx");
        CHECK(rc.layout.order == TensorLayout::Order::HWC);
        CHECK(rc.layout.mean[0] == 0.5);
        CHECK(rc.layout.stddev[2] == 0.3);
        std::filesystem::remove(path);
    }
    SUBCASE("unknown key names the file") {
        const auto path = write_config("unknown", "no-such-key = 1\n");
        RunConfig rc;
        CHECK_THROWS_WITH_AS(apply_config_file(rc, path.string()),
                             doctest::Contains(path.string().c_str()), ConfigError);
        std::filesystem::remove(path);
    }
    SUBCASE("malformed line reports file and line number") {
        const auto path = write_config("broken", "threshold = 0.4\nthis line has no equals\n");
        RunConfig rc;
        CHECK_THROWS_WITH_AS(apply_config_file(rc, path.string()), doctest::Contains(":2"),
                             ConfigError);
        std::filesystem::remove(path);
    }
    SUBCASE("bad numeric value throws") {
        const auto path = write_config("badnum", "threshold = banana\n");
        RunConfig rc;
        CHECK_THROWS_AS(apply_config_file(rc, path.string()), ConfigError);
        std::filesystem::remove(path);
    }
    SUBCASE("missing file throws ConfigError") {
        RunConfig rc;
        CHECK_THROWS_AS(apply_config_file(rc, "/nonexistent/srise.conf"), ConfigError);
    }
}

TEST_CASE("make_embedder") {
    RunConfig rc;
    rc.image_size = 32;
    Rng rng(1);
    SUBCASE("builtin names") {
        rc.embedder = "patch-mean";
        CHECK(make_embedder(rc, rng)->name() == "patch-mean-4");
        rc.embedder = "random-projection";
        CHECK(make_embedder(rc, rng)->name() == "random-projection-64");
        rc.embedder = "randomized";
        CHECK(make_embedder(rc, rng)->name() == "randomized");
    }
    SUBCASE("randomized embedders from one stream differ, replays match") {
        rc.embedder = "randomized";
        Rng s1(9);
        const auto a = make_embedder(rc, s1);
        const auto b = make_embedder(rc, s1);
        Image img(32, 32, 3, 0.5);
        Rng noise(2);
        for (double& v : img.data) v = noise.uniform01();
        CHECK(a->embed(img).values != b->embed(img).values);
        Rng s2(9);
        const auto a2 = make_embedder(rc, s2);
        CHECK(a->embed(img).values == a2->embed(img).values);
    }
    SUBCASE("unknown embedder and missing model path") {
        rc.embedder = "resnet50";
        CHECK_THROWS_AS(make_embedder(rc, rng), ConfigError);
        rc.embedder = "external";
        rc.model_path.clear();
        CHECK_THROWS_AS(make_embedder(rc, rng), ConfigError);
    }
}
