#include "types.hpp"

#include <cmath>
#include <stdexcept>

namespace refnoise {

namespace {

[[noreturn]] void fail(std::string_view field, const std::string& what) {
    throw std::invalid_argument(std::string(field) + ": " + what);
}

void require_count(double v, std::string_view field) {
    if (!std::isfinite(v) || v < 0.0) {
        fail(field, "must be a finite non-negative count, got " + std::to_string(v));
    }
}

}  // namespace

Fraction::Fraction(double value, std::string_view field) : value_(value) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        fail(field, "must lie in [0, 1], got " + std::to_string(value));
    }
}

Fraction validate_fraction(double x, std::string_view field) {
    return Fraction(x, field);
}

Cohort::Cohort(std::int64_t n_positive, std::int64_t n_negative)
    : n_positive_(n_positive), n_negative_(n_negative) {
    if (n_positive < 0) fail("n_positive", "must be non-negative");
    if (n_negative < 0) fail("n_negative", "must be non-negative");
    if (n_positive + n_negative <= 0) fail("n_total", "cohort must contain at least one case");
}

ConfusionCounts::ConfusionCounts(double tp, double fn, double tn, double fp)
    : tp_(tp), fn_(fn), tn_(tn), fp_(fp) {
    require_count(tp, "tp");
    require_count(fn, "fn");
    require_count(tn, "tn");
    require_count(fp, "fp");
}

bool ConfusionCounts::is_integral() const {
    for (double v : {tp_, fn_, tn_, fp_}) {
        if (std::abs(v - std::round(v)) > kCountSlack) return false;
    }
    return true;
}

AgreementTable::AgreementTable(const Cohort& cohort,
                               const ConfusionCounts& model,
                               const ConfusionCounts& reference,
                               double overlap_pos,
                               double overlap_neg)
    : cohort_(cohort),
      model_(model),
      reference_(reference),
      overlap_pos_(overlap_pos),
      overlap_neg_(overlap_neg) {
    const double pos = static_cast<double>(cohort.n_positive());
    const double neg = static_cast<double>(cohort.n_negative());
    if (std::abs(model.positives() - pos) > kCountSlack ||
        std::abs(model.negatives() - neg) > kCountSlack) {
        fail("model", "confusion counts do not match the cohort strata");
    }
    if (std::abs(reference.positives() - pos) > kCountSlack ||
        std::abs(reference.negatives() - neg) > kCountSlack) {
        fail("reference", "confusion counts do not match the cohort strata");
    }

    // The Frechet interval for each overlap cell follows from requiring all
    // four derived cells of the stratum to be non-negative.
    auto check_overlap = [](double overlap, double model_pos, double ref_pos,
                            double stratum, std::string_view field) {
        const double lo = std::max(0.0, model_pos + ref_pos - stratum);
        const double hi = std::min(model_pos, ref_pos);
        if (!std::isfinite(overlap) || overlap < lo - kCountSlack || overlap > hi + kCountSlack) {
            fail(field, "overlap " + std::to_string(overlap) + " outside Frechet interval [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    };
    check_overlap(overlap_pos, model.tp(), reference.tp(), pos, "overlap_pos");
    check_overlap(overlap_neg, model.fp(), reference.fp(), neg, "overlap_neg");
}

namespace {

StratumCells make_cells(double stratum, double model_pos, double ref_pos, double overlap) {
    // Clamp tiny negative residue from float cancellation; validated above.
    auto clamp0 = [](double v) { return v < 0.0 ? 0.0 : v; };
    return StratumCells{
        overlap,
        clamp0(model_pos - overlap),
        clamp0(ref_pos - overlap),
        clamp0(stratum - model_pos - ref_pos + overlap),
    };
}

}  // namespace

StratumCells AgreementTable::positive_stratum() const {
    return make_cells(static_cast<double>(cohort_.n_positive()), model_.tp(), reference_.tp(),
                      overlap_pos_);
}

StratumCells AgreementTable::negative_stratum() const {
    return make_cells(static_cast<double>(cohort_.n_negative()), model_.fp(), reference_.fp(),
                      overlap_neg_);
}

namespace {

Fraction make_range(Fraction worst, Fraction best) {
    if (worst.value() > best.value()) {
        fail("bounds", "worst (" + std::to_string(worst.value()) + ") exceeds best (" +
                           std::to_string(best.value()) + ")");
    }
    return Fraction(best.value() - worst.value(), "range");
}

}  // namespace

MetricBounds::MetricBounds(Fraction worst, Fraction best)
    : worst_(worst), best_(best), range_(make_range(worst, best)) {}

}  // namespace refnoise
