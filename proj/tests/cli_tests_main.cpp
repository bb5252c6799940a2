// Subprocess tests for the srise command-line tool. Invoked by ctest with
// the tool path as argv[1]; exercises exit codes, output files, and the
// byte-reproducibility of seeded runs.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "srise/fixtures.hpp"
#include "srise/image_io.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

#define CHECK_MSG(cond, msg)                                                                      \
    do {                                                                                          \
        if (cond) {                                                                               \
            std::cout << "  ok: " << msg << "\n";                                                 \
        } else {                                                                                  \
            std::cout << "  FAILED: " << msg << " (" << __FILE__ << ":" << __LINE__ << ")\n";     \
            ++g_failures;                                                                         \
        }                                                                                         \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) {
        r.exit_code = -1;
        return r;
    }
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
        r.output.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

double channel_sum(const srise::Image& img, int channel) {
    double sum = 0.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) sum += img.at(y, x, channel);
    }
    return sum;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: srise_cli_tests <path-to-srise>\n";
        return 1;
    }
    const std::string srise = argv[1];
    const fs::path work = fs::temp_directory_path() / "srise_cli_tests";
    fs::remove_all(work);
    fs::create_directories(work);
    const auto in = [&](const std::string& rel) { return (work / rel).string(); };

    std::cout << "== gen-fixtures ==\n";
    {
        const auto r = run(srise + " gen-fixtures --triplets 3 --out " + in("ds") + " --seed 5");
        CHECK_MSG(r.exit_code == 0, "gen-fixtures exits 0");
        CHECK_MSG(fs::exists(in("ds/triplet_000/probe.png")), "probe.png written");
        CHECK_MSG(fs::exists(in("ds/triplet_002/nonmate.png")), "nonmate.png written");
    }

    std::cout << "== explain ==\n";
    {
        const std::string base = srise + " explain " + in("ds/triplet_000/probe.png") + " " +
                                 in("ds/triplet_000/mate.png") + " --seed 3 --masks 80";
        const auto r = run(base + " --out " + in("exp"));
        CHECK_MSG(r.exit_code == 0, "explain exits 0");
        for (const char* name : {"map_a.csv", "map_b.csv", "map_a.bin", "map_b.bin",
                                 "overlay_a.png", "overlay_b.png"}) {
            CHECK_MSG(fs::exists(work / "exp" / name), std::string("output file ") + name);
        }
        const auto json = nlohmann::json::parse(slurp(work / "exp" / "explanation.json"));
        const double base_sim = json.at("base_similarity").get<double>();
        CHECK_MSG(base_sim >= -1.0 && base_sim <= 1.0, "base_similarity in [-1,1]");
        CHECK_MSG(json.at("per_mask_scores_a").size() == 80, "per-mask scores have length N");

        // Determinism: identical seed and config, fresh output directory.
        const auto r2 = run(base + " --out " + in("exp2"));
        CHECK_MSG(r2.exit_code == 0, "explain rerun exits 0");
        for (const char* name : {"map_a.csv", "map_b.csv", "map_a.bin", "map_b.bin",
                                 "explanation.json"}) {
            CHECK_MSG(slurp(work / "exp" / name) == slurp(work / "exp2" / name),
                      std::string("byte-identical rerun: ") + name);
        }

        // Worker-count invariance.
        const auto r4 = run(base + " --out " + in("exp4") + " --workers 4");
        CHECK_MSG(r4.exit_code == 0, "explain with 4 workers exits 0");
        CHECK_MSG(slurp(work / "exp" / "map_a.csv") == slurp(work / "exp4" / "map_a.csv"),
                  "worker count does not change map bytes");
    }

    std::cout << "== explain error paths ==\n";
    {
        const auto r = run(srise + " explain " + in("ds/missing.png") + " " +
                           in("ds/triplet_000/mate.png") + " --out " + in("err"));
        CHECK_MSG(r.exit_code == 2, "missing input exits 2");
        CHECK_MSG(r.output.find("missing.png") != std::string::npos,
                  "diagnostic names the missing path");

        std::ofstream(work / "bad.conf") << "unknown-key = 5\n";
        const auto r2 = run(srise + " explain " + in("ds/triplet_000/probe.png") + " " +
                            in("ds/triplet_000/mate.png") + " --config " + in("bad.conf") +
                            " --out " + in("err2"));
        CHECK_MSG(r2.exit_code == 2, "malformed config exits 2");
        CHECK_MSG(r2.output.find("bad.conf") != std::string::npos,
                  "diagnostic names the config path");
    }

    std::cout << "== triplet ==\n";
    {
        const auto r = run(srise + " triplet " + in("ds/triplet_000/probe.png") + " " +
                           in("ds/triplet_000/mate.png") + " " + in("ds/triplet_000/nonmate.png") +
                           " --seed 3 --masks 80 --out " + in("tri"));
        CHECK_MSG(r.exit_code == 0, "triplet exits 0");
        const auto json = nlohmann::json::parse(slurp(work / "tri" / "triplet.json"));
        CHECK_MSG(json.at("weight_match").get<double>() == 1.0, "weight_match is 1 in ratio mode");
        const double wn = json.at("weight_nonmatch").get<double>();
        CHECK_MSG(wn >= 0.0 && wn <= 1.0, "weight_nonmatch in [0,1]");

        // A nonmate overlay must render dimmer: the weighted map pulls pixels
        // toward the cold end of the colormap, so its red channel shrinks.
        const srise::Image match_ov =
            srise::load_image((work / "tri" / "overlay_match_probe.png").string());
        const srise::Image nonmatch_ov =
            srise::load_image((work / "tri" / "overlay_nonmatch_probe.png").string());
        CHECK_MSG(channel_sum(nonmatch_ov, 0) < channel_sum(match_ov, 0),
                  "nonmatch overlay is dimmer than the match overlay");

        // mate == nonmate forces weight 1.
        const auto r2 = run(srise + " triplet " + in("ds/triplet_000/probe.png") + " " +
                            in("ds/triplet_000/mate.png") + " " + in("ds/triplet_000/mate.png") +
                            " --seed 3 --masks 40 --out " + in("tri2"));
        CHECK_MSG(r2.exit_code == 0, "triplet with mate==nonmate exits 0");
        const auto json2 = nlohmann::json::parse(slurp(work / "tri2" / "triplet.json"));
        CHECK_MSG(json2.at("weight_nonmatch").get<double>() == 1.0,
                  "identical mate and nonmate give weight 1");
    }

    std::cout << "== eval ==\n";
    {
        const auto r = run(srise + " eval " + in("ds") +
                           " --seed 11 --masks 10,50 --threshold 0.75 --step 32 --out " +
                           in("ev"));
        CHECK_MSG(r.exit_code == 0, "eval exits 0");
        const std::string table = slurp(work / "ev" / "table.csv");
        CHECK_MSG(table.rfind("method,iterations,deletion,insertion,average\n", 0) == 0,
                  "table.csv header matches the published layout");
        CHECK_MSG(std::count(table.begin(), table.end(), '\n') == 3,
                  "one table row per requested N");
        CHECK_MSG(table.find("S-RISE,10,") != std::string::npos, "row for N=10");
        CHECK_MSG(table.find("S-RISE,50,") != std::string::npos, "row for N=50");
        CHECK_MSG(fs::exists(work / "ev" / "report_N10.json"), "per-N JSON report");
        CHECK_MSG(fs::exists(work / "ev" / "report_N50.csv"), "per-N CSV report");

        const auto json = nlohmann::json::parse(slurp(work / "ev" / "report_N10.json"));
        CHECK_MSG(json.at("pairs").size() == 3, "one report row per triplet");

        // Determinism across reruns and worker counts.
        const auto r2 = run(srise + " eval " + in("ds") +
                            " --seed 11 --masks 10,50 --threshold 0.75 --step 32 --workers 4 --out " +
                            in("ev4"));
        CHECK_MSG(r2.exit_code == 0, "eval with 4 workers exits 0");
        CHECK_MSG(slurp(work / "ev" / "table.csv") == slurp(work / "ev4" / "table.csv"),
                  "table.csv identical across worker counts");
        CHECK_MSG(slurp(work / "ev" / "report_N50.csv") == slurp(work / "ev4" / "report_N50.csv"),
                  "reports identical across worker counts");

        const auto r3 = run(srise + " eval " + in("empty_ds") + " --out " + in("ev_err"));
        CHECK_MSG(r3.exit_code == 2, "missing dataset exits 2");
    }

    std::cout << "== sanity ==\n";
    {
        // A structured pair the patch-pooling embedder resolves but a random
        // projection cannot: the fixture generator writes it as PNGs first.
        const auto [probe, mate] = srise::fixtures::make_checker_pair(0, 112);
        fs::create_directories(work / "sanity_in");
        srise::save_png(probe, in("sanity_in/probe.png"));
        srise::save_png(mate, in("sanity_in/mate.png"));

        const auto pass = run(srise + " sanity " + in("sanity_in/probe.png") + " " +
                              in("sanity_in/mate.png") +
                              " --seed 21 --masks 1500 --out " + in("san"));
        CHECK_MSG(pass.exit_code == 0, "sanity passes on the structured fixture");
        CHECK_MSG(fs::exists(work / "san" / "sanity.json"), "sanity.json written");
        CHECK_MSG(fs::exists(work / "san" / "sanity_strip.png"), "comparison strip written");
        const auto json = nlohmann::json::parse(slurp(work / "san" / "sanity.json"));
        CHECK_MSG(json.at("passed").get<bool>(), "sanity.json records the pass");

        // Randomized-vs-randomized control: reruns of a structureless
        // embedder cannot clear the margin.
        const auto control = run(srise + " sanity " + in("sanity_in/probe.png") + " " +
                                 in("sanity_in/mate.png") +
                                 " --embedder randomized --seed 21 --masks 400 --out " +
                                 in("san_control"));
        CHECK_MSG(control.exit_code == 1, "randomized-vs-randomized control exits 1");

        std::ofstream(work / "bad2.conf") << "margin 0.5\n";
        const auto broken = run(srise + " sanity " + in("sanity_in/probe.png") + " " +
                                in("sanity_in/mate.png") + " --config " + in("bad2.conf") +
                                " --out " + in("san_err"));
        CHECK_MSG(broken.exit_code == 2, "malformed config exits 2");
        CHECK_MSG(broken.output.find("bad2.conf") != std::string::npos,
                  "config diagnostic names the file");
    }

    std::cout << "== inputs are never mutated ==\n";
    {
        const std::string before = slurp(work / "ds/triplet_000/probe.png");
        run(srise + " explain " + in("ds/triplet_000/probe.png") + " " +
            in("ds/triplet_000/mate.png") + " --seed 9 --masks 20 --out " + in("mut"));
        CHECK_MSG(slurp(work / "ds/triplet_000/probe.png") == before, "input bytes unchanged");
    }

    if (g_failures == 0) {
        std::cout << "\nall CLI checks passed\n";
        fs::remove_all(work);
        return 0;
    }
    std::cout << "\n" << g_failures << " CLI check(s) failed; artifacts kept in " << work << "\n";
    return 1;
}
