#include "srise/serialize.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

namespace srise {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json pair_json(const PairExplanation& p) {
    ordered_json j;
    j["base_similarity"] = p.base_similarity;
    j["num_masks"] = p.per_mask_scores_a.size();
    j["map_height"] = p.map_a.height;
    j["map_width"] = p.map_a.width;
    j["per_mask_scores_a"] = p.per_mask_scores_a;
    j["per_mask_scores_b"] = p.per_mask_scores_b;
    j["diagnostics"] = {{"degenerate_a", p.degenerate_a}, {"degenerate_b", p.degenerate_b}};
    return j;
}

ordered_json metric_json(const MetricResult& m) {
    return {{"fraction", m.fraction}, {"crossed", m.crossed}};
}

void append_num(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

} // namespace

std::string to_json(const PairExplanation& p) { return pair_json(p).dump(2); }

std::string to_json(const TripletExplanation& t) {
    ordered_json j;
    j["match"] = pair_json(t.match);
    j["nonmatch"] = pair_json(t.nonmatch);
    j["weight_match"] = t.weight_match;
    j["weight_nonmatch"] = t.weight_nonmatch;
    j["degenerate"] = t.degenerate;
    return j.dump(2);
}

std::string to_json(const SanityReport& r) {
    ordered_json j;
    j["r_rerun"] = r.r_rerun;
    j["r_randomized"] = r.r_randomized;
    j["spearman_rerun"] = r.spearman_rerun;
    j["spearman_randomized"] = r.spearman_randomized;
    j["margin"] = r.margin;
    j["passed"] = r.passed;
    return j.dump(2);
}

std::string to_json(const DatasetReport& r) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"id", row.id},
                        {"deletion", metric_json(row.del)},
                        {"insertion", metric_json(row.ins)}});
    }
    ordered_json j;
    j["pairs"] = rows;
    j["mean_deletion"] = r.mean_deletion;
    j["mean_insertion"] = r.mean_insertion;
    j["average"] = r.average;
    return j.dump(2);
}

std::string dataset_report_csv(const DatasetReport& r) {
    std::string out = "id,deletion,deletion_crossed,insertion,insertion_crossed\n";
    for (const auto& row : r.rows) {
        out += row.id;
        out.push_back(',');
        append_num(out, row.del.fraction);
        out += row.del.crossed ? ",1," : ",0,";
        append_num(out, row.ins.fraction);
        out += row.ins.crossed ? ",1\n" : ",0\n";
    }
    out += "summary,";
    append_num(out, r.mean_deletion);
    out += ",,";
    append_num(out, r.mean_insertion);
    out += ",\n";
    return out;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::string out = "method,iterations,deletion,insertion,average\n";
    for (const auto& row : rows) {
        out += row.method;
        out.push_back(',');
        out += std::to_string(row.iterations);
        out.push_back(',');
        append_num(out, row.deletion);
        out.push_back(',');
        append_num(out, row.insertion);
        out.push_back(',');
        append_num(out, row.average);
        out.push_back('\n');
    }
    return out;
}

std::string curve_csv(const MetricResult& m) {
    std::string out = "pixels_changed,similarity\n";
    for (const auto& [pixels, sim] : m.curve) {
        out += std::to_string(pixels);
        out.push_back(',');
        append_num(out, sim);
        out.push_back('\n');
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
}

} // namespace srise
