#pragma once

#include <variant>

#include "types.hpp"

namespace refnoise {

// Expectation-level engine. Everything here is a pure function of its
// arguments; no randomness, no shared state.
//
// All arrangement freedom between the model's labels and the reference
// labels lives inside each ground-truth stratum, where the joint 2x2
// table has a single free cell: the count flagged positive by both.
// Given the marginals, that cell ranges over the Frechet interval
//   [max(0, modelPos + refPos - stratumSize), min(modelPos, refPos)]
// and both observed metrics are increasing in it, so the upper bound
// realizes the best case and the lower bound the worst case for
// sensitivity and specificity simultaneously.

// Expected confusion counts of a classifier at an operating point:
// tp = sensitivity * n_positive, tn = specificity * n_negative, with the
// complements making each stratum sum exact.
ConfusionCounts confusion_counts(const Cohort& cohort, const OperatingPoint& op);

// Model metrics scored against the reference labels of the given joint
// arrangement. Sensitivity is the share of reference positives the model
// also flagged; specificity the share of reference negatives the model
// also cleared. Undefined when the respective reference total is zero.
ObservedMetrics observed_metrics(const AgreementTable& table);

// Joint-arrangement assumption for the point estimator. The default is
// conditional independence of model and reference labels given ground
// truth; callers that know the coupling pass an explicit table.
struct ConditionalIndependence {};
using PointAssumption = std::variant<ConditionalIndependence, AgreementTable>;

// Large-N expectation of the observed metrics. Under conditional
// independence the per-stratum overlap is modelPos * refPos / stratumSize
// (zero for an empty stratum).
ObservedMetrics point_estimate(const Cohort& cohort, const OperatingPoint& model,
                               const OperatingPoint& reference);
ObservedMetrics point_estimate(const Cohort& cohort, const OperatingPoint& model,
                               const OperatingPoint& reference,
                               const PointAssumption& assumption);

// Observed metrics when agreement is maximized (Frechet upper bound per
// stratum) or minimized (lower bound).
ObservedMetrics best_case(const Cohort& cohort, const OperatingPoint& model,
                          const OperatingPoint& reference);
ObservedMetrics worst_case(const Cohort& cohort, const OperatingPoint& model,
                           const OperatingPoint& reference);

// Best/worst packaged per metric; a metric with a zero denominator stays
// undefined rather than producing bounds.
struct BoundsPair {
    std::optional<MetricBounds> sensitivity;
    std::optional<MetricBounds> specificity;
};
BoundsPair metric_bounds(const Cohort& cohort, const OperatingPoint& model,
                         const OperatingPoint& reference);

// The agreement tables behind the three estimators, exposed so callers
// (and the enumeration oracle's consumers) can inspect the arrangement.
AgreementTable independence_table(const Cohort& cohort, const ConfusionCounts& model,
                                  const ConfusionCounts& reference);
AgreementTable max_overlap_table(const Cohort& cohort, const ConfusionCounts& model,
                                 const ConfusionCounts& reference);
AgreementTable min_overlap_table(const Cohort& cohort, const ConfusionCounts& model,
                                 const ConfusionCounts& reference);

}  // namespace refnoise
