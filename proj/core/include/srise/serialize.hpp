#pragma once

#include <string>
#include <vector>

#include "srise/evaluation.hpp"
#include "srise/explainer.hpp"
#include "srise/sanity.hpp"

namespace srise {

/// JSON documents (pretty-printed, two-space indent, stable key order).
std::string to_json(const PairExplanation& p);
std::string to_json(const TripletExplanation& t);
std::string to_json(const SanityReport& r);
std::string to_json(const DatasetReport& r);

/// Per-pair rows plus a trailing summary row.
std::string dataset_report_csv(const DatasetReport& r);

/// One summary row per mask count: method,iterations,deletion,insertion,average.
struct TableRow {
    std::string method;
    int iterations = 0;
    double deletion = 0.0;
    double insertion = 0.0;
    double average = 0.0;
};
std::string table_csv(const std::vector<TableRow>& rows);

/// Metric curve as CSV (pixels_changed,similarity).
std::string curve_csv(const MetricResult& m);

void write_text_file(const std::string& path, const std::string& content);

} // namespace srise
