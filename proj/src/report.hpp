#pragma once

#include <optional>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace refnoise {

enum class TableFormat { Csv, JsonLines };
enum class Metric { Sensitivity, Specificity };

// Fixed tabular schema, one row per sweep record:
//   n_total, prevalence, model_se, model_sp, ref_se, ref_sp,
//   point_sens, point_spec, best_sens, worst_sens, range_sens,
//   best_spec, worst_spec, range_spec, mc_min_sens, mc_max_sens,
//   mc_mean_sens, mc_min_spec, mc_max_spec, mc_mean_spec, mc_trials, seed
// Real values carry 6 decimal digits; undefined values are the literal
// token NA (null in the JSON-lines mirror); the mc_* columns are NA when
// the sweep ran without Monte Carlo. n_total, mc_trials and seed are
// integers.
std::string emit_table(const std::vector<SweepRecord>& records, TableFormat format);

// Parsed view of one CSV row, for consumers and round-trip checks.
struct TableRow {
    std::int64_t n_total = 0;
    double prevalence = 0, model_se = 0, model_sp = 0, ref_se = 0, ref_sp = 0;
    std::optional<double> point_sens, point_spec;
    std::optional<double> best_sens, worst_sens, range_sens;
    std::optional<double> best_spec, worst_spec, range_spec;
    std::optional<double> mc_min_sens, mc_max_sens, mc_mean_sens;
    std::optional<double> mc_min_spec, mc_max_spec, mc_mean_spec;
    std::optional<std::int64_t> mc_trials;
    std::uint64_t seed = 0;
};
std::vector<TableRow> parse_table_csv(const std::string& csv);

// Grid of point estimates for one prevalence and one model point as a
// standalone SVG: one colored cell per reference operating point, the
// value printed in percent inside each cell, linear color scale anchored
// at [0.5, 1.0] (values below clamp to the bottom color and are marked).
// The records must form a complete rectangle over (ref_se, ref_sp);
// missing cells are listed in the rejection.
std::string emit_heatmap(const std::vector<SweepRecord>& records, Metric metric);

// Interval plot for one prevalence and one model point as a standalone
// SVG: one row per reference configuration, a segment spanning
// [worst, best] per metric, a Monte Carlo [min, max] bar when present, a
// dashed rule at the model's true metric, and the widest-range rows
// emphasized.
std::string emit_forest(const std::vector<SweepRecord>& records);

}  // namespace refnoise
