#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace refnoise {

ConfusionCounts sample_labels(const Cohort& cohort, const OperatingPoint& op,
                              RandomStream& stream) {
    const std::int64_t pos = cohort.n_positive();
    const std::int64_t neg = cohort.n_negative();
    const std::int64_t tp = sample_binomial(pos, op.sensitivity.value(), stream);
    const std::int64_t tn = sample_binomial(neg, op.specificity.value(), stream);
    return ConfusionCounts(static_cast<double>(tp), static_cast<double>(pos - tp),
                           static_cast<double>(tn), static_cast<double>(neg - tn));
}

ObservedMetrics run_trial(const TrialConfig& config, std::int64_t trial_index) {
    RandomStream stream(config.seed, static_cast<std::uint64_t>(trial_index));
    const ConfusionCounts model = sample_labels(config.cohort, config.model, stream);
    const ConfusionCounts reference = sample_labels(config.cohort, config.reference, stream);

    // Which cases each classifier flags within a stratum is uniform given
    // the realized marginals, so the overlap cell is hypergeometric; this
    // is the same joint law as independent per-case labeling.
    const std::int64_t overlap_pos =
        sample_hypergeometric(config.cohort.n_positive(),
                              static_cast<std::int64_t>(reference.tp()),
                              static_cast<std::int64_t>(model.tp()), stream);
    const std::int64_t overlap_neg =
        sample_hypergeometric(config.cohort.n_negative(),
                              static_cast<std::int64_t>(reference.fp()),
                              static_cast<std::int64_t>(model.fp()), stream);

    return observed_metrics(AgreementTable(config.cohort, model, reference,
                                           static_cast<double>(overlap_pos),
                                           static_cast<double>(overlap_neg)));
}

namespace {

// Linear interpolation between order statistics of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(h);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

MetricSummary summarize_metric(const std::vector<double>& values) {
    std::vector<double> defined;
    defined.reserve(values.size());
    for (double v : values) {
        if (!std::isnan(v)) defined.push_back(v);
    }
    MetricSummary out;
    out.defined_trials = static_cast<std::int64_t>(defined.size());
    if (defined.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.min = out.max = out.mean = out.stddev = nan;
        out.q025 = out.median = out.q975 = nan;
        return out;
    }

    double sum = 0.0;
    for (double v : defined) sum += v;  // index order: reduction is deterministic
    const double n = static_cast<double>(defined.size());
    out.mean = sum / n;
    double ss = 0.0;
    for (double v : defined) ss += (v - out.mean) * (v - out.mean);
    out.stddev = defined.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

    std::vector<double> sorted = defined;
    std::sort(sorted.begin(), sorted.end());
    out.min = sorted.front();
    out.max = sorted.back();
    out.q025 = quantile_sorted(sorted, 0.025);
    out.median = quantile_sorted(sorted, 0.5);
    out.q975 = quantile_sorted(sorted, 0.975);
    return out;
}

}  // namespace

McSummary run_trials(const TrialConfig& config, int threads) {
    if (config.n_trials < 1) {
        throw std::invalid_argument("n_trials: must be at least 1");
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sens(static_cast<std::size_t>(config.n_trials), nan);
    std::vector<double> spec(static_cast<std::size_t>(config.n_trials), nan);

    parallel_for(config.n_trials, threads, [&](std::int64_t i) {
        const ObservedMetrics m = run_trial(config, i);
        const auto slot = static_cast<std::size_t>(i);
        if (m.sensitivity) sens[slot] = m.sensitivity->value();
        if (m.specificity) spec[slot] = m.specificity->value();
    });

    McSummary out;
    out.sensitivity = summarize_metric(sens);
    out.specificity = summarize_metric(spec);
    out.n_trials = config.n_trials;
    out.seed = config.seed;
    return out;
}

}  // namespace refnoise
