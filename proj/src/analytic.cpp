#include "analytic.hpp"

#include <algorithm>
#include <cmath>

namespace refnoise {

ConfusionCounts confusion_counts(const Cohort& cohort, const OperatingPoint& op) {
    const double pos = static_cast<double>(cohort.n_positive());
    const double neg = static_cast<double>(cohort.n_negative());
    const double tp = op.sensitivity.value() * pos;
    const double tn = op.specificity.value() * neg;
    return ConfusionCounts(tp, pos - tp, tn, neg - tn);
}

namespace {

// Ratios can overshoot 1 by a few ulp when numerator and denominator are
// products of the same factors; clamp before wrapping as Fraction.
std::optional<Fraction> ratio_metric(double numerator, double denominator) {
    if (denominator <= 0.0) return std::nullopt;
    return Fraction(std::clamp(numerator / denominator, 0.0, 1.0));
}

}  // namespace

ObservedMetrics observed_metrics(const AgreementTable& table) {
    const StratumCells pos = table.positive_stratum();
    const StratumCells neg = table.negative_stratum();
    const ConfusionCounts& ref = table.reference();
    return ObservedMetrics{
        ratio_metric(pos.both_pos + neg.both_pos, ref.flagged_positive()),
        ratio_metric(pos.both_neg + neg.both_neg, ref.flagged_negative()),
    };
}

AgreementTable independence_table(const Cohort& cohort, const ConfusionCounts& model,
                                  const ConfusionCounts& reference) {
    const double pos = static_cast<double>(cohort.n_positive());
    const double neg = static_cast<double>(cohort.n_negative());
    const double overlap_pos = pos > 0.0 ? model.tp() * reference.tp() / pos : 0.0;
    const double overlap_neg = neg > 0.0 ? model.fp() * reference.fp() / neg : 0.0;
    return AgreementTable(cohort, model, reference, overlap_pos, overlap_neg);
}

AgreementTable max_overlap_table(const Cohort& cohort, const ConfusionCounts& model,
                                 const ConfusionCounts& reference) {
    return AgreementTable(cohort, model, reference, std::min(model.tp(), reference.tp()),
                          std::min(model.fp(), reference.fp()));
}

AgreementTable min_overlap_table(const Cohort& cohort, const ConfusionCounts& model,
                                 const ConfusionCounts& reference) {
    const double pos = static_cast<double>(cohort.n_positive());
    const double neg = static_cast<double>(cohort.n_negative());
    return AgreementTable(cohort, model, reference,
                          std::max(0.0, model.tp() + reference.tp() - pos),
                          std::max(0.0, model.fp() + reference.fp() - neg));
}

ObservedMetrics point_estimate(const Cohort& cohort, const OperatingPoint& model,
                               const OperatingPoint& reference) {
    return observed_metrics(
        independence_table(cohort, confusion_counts(cohort, model), confusion_counts(cohort, reference)));
}

ObservedMetrics point_estimate(const Cohort& cohort, const OperatingPoint& model,
                               const OperatingPoint& reference, const PointAssumption& assumption) {
    if (const auto* table = std::get_if<AgreementTable>(&assumption)) {
        return observed_metrics(*table);
    }
    return point_estimate(cohort, model, reference);
}

ObservedMetrics best_case(const Cohort& cohort, const OperatingPoint& model,
                          const OperatingPoint& reference) {
    return observed_metrics(
        max_overlap_table(cohort, confusion_counts(cohort, model), confusion_counts(cohort, reference)));
}

ObservedMetrics worst_case(const Cohort& cohort, const OperatingPoint& model,
                           const OperatingPoint& reference) {
    return observed_metrics(
        min_overlap_table(cohort, confusion_counts(cohort, model), confusion_counts(cohort, reference)));
}

BoundsPair metric_bounds(const Cohort& cohort, const OperatingPoint& model,
                         const OperatingPoint& reference) {
    const ObservedMetrics best = best_case(cohort, model, reference);
    const ObservedMetrics worst = worst_case(cohort, model, reference);
    // The two extremes are computed through separately rounded sums, so the
    // worst can land an ulp above the best when there is no real freedom.
    auto pack = [](std::optional<Fraction> w, std::optional<Fraction> b) -> std::optional<MetricBounds> {
        if (!w || !b) return std::nullopt;
        return MetricBounds(Fraction(std::min(w->value(), b->value())), *b);
    };
    return BoundsPair{pack(worst.sensitivity, best.sensitivity),
                      pack(worst.specificity, best.specificity)};
}

}  // namespace refnoise
