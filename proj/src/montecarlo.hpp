#pragma once

#include <cstdint>

#include "analytic.hpp"
#include "sampling.hpp"
#include "types.hpp"

namespace refnoise {

// Stochastic labeling of the cohort. Each trial draws both classifiers'
// labels independently given ground truth and scores the model against
// the realized reference labels.
//
// Reproducibility contract: every trial reads its own counter-based
// substream keyed by (seed, trial index), and aggregation touches the
// per-trial values in index order, so run_trials is bit-identical for a
// fixed config regardless of worker count or scheduling.

struct TrialConfig {
    Cohort cohort;
    OperatingPoint model;
    OperatingPoint reference;
    std::int64_t n_trials = 5000;
    std::uint64_t seed = 0;
};

// Distribution of one observed metric over the defined trials. All
// fields are NaN when defined_trials is zero. stddev is the sample
// standard deviation (0 for a single trial); quantiles interpolate
// linearly between order statistics.
struct MetricSummary {
    double min = 0, max = 0, mean = 0, stddev = 0;
    double q025 = 0, median = 0, q975 = 0;
    std::int64_t defined_trials = 0;

    bool defined() const { return defined_trials > 0; }
};

struct McSummary {
    MetricSummary sensitivity;
    MetricSummary specificity;
    std::int64_t n_trials = 0;
    std::uint64_t seed = 0;
};

// One stochastic labeling of the cohort: tp ~ Binomial(n_positive, se),
// tn ~ Binomial(n_negative, sp), complements exact. Integer counts.
ConfusionCounts sample_labels(const Cohort& cohort, const OperatingPoint& op,
                              RandomStream& stream);

// Draws model and reference labels independently, couples them within
// each stratum by a hypergeometric overlap (equivalent to labeling each
// case independently), and scores the realized table.
ObservedMetrics run_trial(const TrialConfig& config, std::int64_t trial_index);

// Aggregates run_trial over n_trials. Trials whose metric is undefined
// are excluded from that metric's aggregates; if every trial is
// undefined the summary's metric is undefined. threads <= 0 picks the
// hardware concurrency.
McSummary run_trials(const TrialConfig& config, int threads = 1);

}  // namespace refnoise
