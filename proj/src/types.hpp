#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace refnoise {

// Absolute slack used when checking count identities (marginal sums,
// stratum totals). Counts in this engine are real-valued products of
// rates and stratum sizes; 1e-6 of a case is far below anything the
// metrics can resolve.
inline constexpr double kCountSlack = 1e-6;

// A dimensionless rate in [0, 1]. Construction rejects anything else,
// so a Fraction in hand is always valid.
class Fraction {
public:
    explicit Fraction(double value) : Fraction(value, "fraction") {}
    Fraction(double value, std::string_view field);

    double value() const { return value_; }

private:
    double value_;
};

// A classifier's (sensitivity, specificity) pair.
struct OperatingPoint {
    Fraction sensitivity;
    Fraction specificity;
};

// Ground-truth population split into positive and negative strata.
class Cohort {
public:
    Cohort(std::int64_t n_positive, std::int64_t n_negative);

    std::int64_t n_positive() const { return n_positive_; }
    std::int64_t n_negative() const { return n_negative_; }
    std::int64_t n_total() const { return n_positive_ + n_negative_; }
    double prevalence() const {
        return static_cast<double>(n_positive_) / static_cast<double>(n_total());
    }

private:
    std::int64_t n_positive_;
    std::int64_t n_negative_;
};

// One classifier's counts against ground truth. Counts are real-valued:
// expectation-level counts are products like sensitivity * stratum size
// and only the Monte Carlo path produces integers.
class ConfusionCounts {
public:
    ConfusionCounts(double tp, double fn, double tn, double fp);

    double tp() const { return tp_; }
    double fn() const { return fn_; }
    double tn() const { return tn_; }
    double fp() const { return fp_; }

    double positives() const { return tp_ + fn_; }   // ground-truth positive stratum
    double negatives() const { return tn_ + fp_; }   // ground-truth negative stratum
    double flagged_positive() const { return tp_ + fp_; }
    double flagged_negative() const { return tn_ + fn_; }

    // True iff all four counts sit on integers to within kCountSlack.
    bool is_integral() const;

private:
    double tp_, fn_, tn_, fp_;
};

// The four cells of a model-vs-reference cross table within one
// ground-truth stratum.
struct StratumCells {
    double both_pos;
    double model_only_pos;
    double ref_only_pos;
    double both_neg;
};

// Joint arrangement of model labels against reference labels, stratified
// by ground truth. Within each stratum the table has one degree of
// freedom: the overlap cell (cases flagged positive by both classifiers).
// The marginals are stored, not recomputed, so recovering them is exact.
class AgreementTable {
public:
    AgreementTable(const Cohort& cohort,
                   const ConfusionCounts& model,
                   const ConfusionCounts& reference,
                   double overlap_pos,
                   double overlap_neg);

    const Cohort& cohort() const { return cohort_; }
    const ConfusionCounts& model() const { return model_; }
    const ConfusionCounts& reference() const { return reference_; }
    double overlap_pos() const { return overlap_pos_; }
    double overlap_neg() const { return overlap_neg_; }

    StratumCells positive_stratum() const;
    StratumCells negative_stratum() const;

private:
    Cohort cohort_;
    ConfusionCounts model_;
    ConfusionCounts reference_;
    double overlap_pos_;
    double overlap_neg_;
};

// Observed (apparent) metrics of the model when the reference labels are
// treated as truth. A metric is undefined exactly when its denominator
// (reference-positive or reference-negative total) is zero; undefined is
// a value here, never an error.
struct ObservedMetrics {
    std::optional<Fraction> sensitivity;
    std::optional<Fraction> specificity;
};

// Best/worst attainable value of one observed metric plus their spread.
class MetricBounds {
public:
    MetricBounds(Fraction worst, Fraction best);

    Fraction worst() const { return worst_; }
    Fraction best() const { return best_; }
    Fraction range() const { return range_; }

private:
    Fraction worst_;
    Fraction best_;
    Fraction range_;
};

Fraction validate_fraction(double x, std::string_view field = "fraction");

}  // namespace refnoise
