#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "montecarlo.hpp"
#include "types.hpp"

namespace refnoise {

// Largest cohort the enumeration oracle accepts. The oracle's point is
// certifying the closed-form bounds by brute force; anything bigger
// belongs to the analytic path. 100 is the smallest total admitting
// integer marginals for the canonical 30% / 80-80 / 90-90 scenario.
inline constexpr std::int64_t kOracleMaxTotal = 100;

// One axis of reference operating points, lo..hi inclusive. Values are
// generated from an integer basis in micro-units (1e-6), never by
// accumulating floating steps, so cells compare exactly across runs.
struct GridAxis {
    double lo = 0.90;
    double hi = 1.00;
    double step = 0.01;

    std::vector<double> values() const;  // throws if the axis is malformed
};

struct SweepSpec {
    std::int64_t n_total = 10000;
    std::vector<double> prevalences;
    std::vector<OperatingPoint> model_points;
    GridAxis reference_grid;  // applied independently to sensitivity and specificity
    std::int64_t n_trials = 5000;
    std::uint64_t seed = 42;
    bool include_mc = false;
};

struct SweepRecord {
    std::int64_t n_total;
    double prevalence;
    OperatingPoint model;
    OperatingPoint reference;
    ObservedMetrics point;
    std::optional<MetricBounds> sens_bounds;
    std::optional<MetricBounds> spec_bounds;
    std::optional<McSummary> mc;
    std::uint64_t seed;
};

// One record per (prevalence x model point x grid cell), in that nesting
// order with both grid axes ascending (sensitivity outer). Deterministic
// for a fixed spec, including the Monte Carlo columns: every cell gets a
// substream derived from (seed, cell ordinal).
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int threads = 1);

struct ConfigKey {
    double prevalence;
    OperatingPoint model;
    OperatingPoint reference;
};

// Per-metric spread extrema plus the largest shrink of that spread from
// pushing one reference axis from the low end of its grid to the high
// end while everything else stays fixed.
struct MetricExtremes {
    double min_range;
    double max_range;
    ConfigKey argmax;
};

struct AxisDelta {
    double shrink;        // range(axis at lo) - range(axis at hi), maximized
    double fixed_other;   // the other axis' coordinate where the maximum occurs
    double prevalence;
    OperatingPoint model;
};

struct ExtremesReport {
    std::optional<MetricExtremes> sensitivity;
    std::optional<MetricExtremes> specificity;
    // Shrink of the sensitivity/specificity range from raising reference
    // sensitivity (se) or reference specificity (sp) across the grid.
    std::optional<AxisDelta> sens_from_ref_se;
    std::optional<AxisDelta> sens_from_ref_sp;
    std::optional<AxisDelta> spec_from_ref_se;
    std::optional<AxisDelta> spec_from_ref_sp;
};

ExtremesReport summarize_extremes(const std::vector<SweepRecord>& records);

// Minimum point-estimate observed sensitivity of a perfect model over
// the reference grid; for a perfect model this is the reference
// labeler's PPV, so there is no arrangement freedom. nullopt if the
// metric is undefined on the whole grid.
std::optional<double> perfect_model_floor(std::int64_t n_total, Fraction prevalence,
                                          const GridAxis& grid);

struct OracleExtrema {
    std::optional<Fraction> sens_min, sens_max;
    std::optional<Fraction> spec_min, spec_max;
    std::int64_t tables_enumerated = 0;
};

// Exhaustively evaluates every integer agreement table consistent with
// the given marginals (the one free overlap cell per stratum runs over
// its integer Frechet interval) and reports the exact per-metric
// extrema. Independent of the closed-form bound construction by design:
// this is the arbiter for it. Requires integral marginals and
// n_total <= kOracleMaxTotal.
OracleExtrema enumerate_oracle(const Cohort& cohort, const ConfusionCounts& model_counts,
                               const ConfusionCounts& reference_counts);

}  // namespace refnoise
