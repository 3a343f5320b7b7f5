#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cohort.hpp"
#include "parallel.hpp"

namespace refnoise {

namespace {

constexpr double kMicro = 1e6;

std::int64_t to_micro(double v, const char* field) {
    const double scaled = v * kMicro;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-3) {
        throw std::invalid_argument(std::string(field) +
                                    ": grid values must be multiples of 1e-6, got " +
                                    std::to_string(v));
    }
    return static_cast<std::int64_t>(rounded);
}

}  // namespace

std::vector<double> GridAxis::values() const {
    validate_fraction(lo, "reference_grid.lo");
    validate_fraction(hi, "reference_grid.hi");
    if (lo > hi) throw std::invalid_argument("reference_grid: lo exceeds hi");
    if (!(step > 0.0)) throw std::invalid_argument("reference_grid.step: must be positive");

    const std::int64_t lo_u = to_micro(lo, "reference_grid.lo");
    const std::int64_t hi_u = to_micro(hi, "reference_grid.hi");
    const std::int64_t step_u = to_micro(step, "reference_grid.step");
    if (step_u <= 0) throw std::invalid_argument("reference_grid.step: must be at least 1e-6");
    if ((hi_u - lo_u) % step_u != 0) {
        throw std::invalid_argument("reference_grid: step does not divide hi - lo evenly");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>((hi_u - lo_u) / step_u + 1));
    for (std::int64_t v = lo_u; v <= hi_u; v += step_u) {
        out.push_back(static_cast<double>(v) / kMicro);
    }
    return out;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int threads) {
    if (spec.prevalences.empty()) throw std::invalid_argument("prevalences: none given");
    if (spec.model_points.empty()) throw std::invalid_argument("model_points: none given");
    const std::vector<double> axis = spec.reference_grid.values();

    struct Cell {
        double prevalence;
        OperatingPoint model;
        OperatingPoint reference;
    };
    std::vector<Cell> cells;
    cells.reserve(spec.prevalences.size() * spec.model_points.size() * axis.size() * axis.size());
    for (double p : spec.prevalences) {
        const Fraction prev = validate_fraction(p, "prevalence");
        for (const OperatingPoint& model : spec.model_points) {
            for (double se : axis) {
                for (double sp : axis) {
                    cells.push_back(Cell{prev.value(), model,
                                         OperatingPoint{Fraction(se), Fraction(sp)}});
                }
            }
        }
    }

    std::vector<SweepRecord> records(cells.size(),
                                     SweepRecord{0,
                                                 0.0,
                                                 OperatingPoint{Fraction(0), Fraction(0)},
                                                 OperatingPoint{Fraction(0), Fraction(0)},
                                                 {},
                                                 std::nullopt,
                                                 std::nullopt,
                                                 std::nullopt,
                                                 0});
    parallel_for(static_cast<std::int64_t>(cells.size()), threads, [&](std::int64_t i) {
        const Cell& cell = cells[static_cast<std::size_t>(i)];
        const Cohort cohort = make_cohort(spec.n_total, Fraction(cell.prevalence));
        SweepRecord rec{spec.n_total,
                        cell.prevalence,
                        cell.model,
                        cell.reference,
                        point_estimate(cohort, cell.model, cell.reference),
                        std::nullopt,
                        std::nullopt,
                        std::nullopt,
                        spec.seed};
        const BoundsPair bounds = metric_bounds(cohort, cell.model, cell.reference);
        rec.sens_bounds = bounds.sensitivity;
        rec.spec_bounds = bounds.specificity;
        if (spec.include_mc) {
            TrialConfig mc{cohort, cell.model, cell.reference, spec.n_trials,
                           RandomStream::derive(spec.seed, static_cast<std::uint64_t>(i))};
            rec.mc = run_trials(mc, 1);
        }
        records[static_cast<std::size_t>(i)] = rec;
    });
    return records;
}

namespace {

double range_of(const std::optional<MetricBounds>& b) {
    return b ? b->range().value() : std::numeric_limits<double>::quiet_NaN();
}

std::optional<MetricExtremes> metric_extremes(const std::vector<SweepRecord>& records,
                                              bool sensitivity) {
    std::optional<MetricExtremes> out;
    for (const SweepRecord& r : records) {
        const double range = range_of(sensitivity ? r.sens_bounds : r.spec_bounds);
        if (std::isnan(range)) continue;
        if (!out) {
            out = MetricExtremes{range, range, ConfigKey{r.prevalence, r.model, r.reference}};
            continue;
        }
        out->min_range = std::min(out->min_range, range);
        if (range > out->max_range) {
            out->max_range = range;
            out->argmax = ConfigKey{r.prevalence, r.model, r.reference};
        }
    }
    return out;
}

bool same_coord(double a, double b) { return std::abs(a - b) < 0.5 / kMicro; }

// Largest drop of `metric`'s range when `moving_axis` goes from the low
// end of its observed values to the high end, with prevalence, model and
// the other axis fixed.
std::optional<AxisDelta> axis_delta(const std::vector<SweepRecord>& records, bool sens_metric,
                                    bool moving_is_se) {
    double axis_lo = 0.0, axis_hi = 0.0;
    bool have_axis = false;
    for (const SweepRecord& r : records) {
        const double v =
            moving_is_se ? r.reference.sensitivity.value() : r.reference.specificity.value();
        if (!have_axis) {
            axis_lo = axis_hi = v;
            have_axis = true;
        } else {
            axis_lo = std::min(axis_lo, v);
            axis_hi = std::max(axis_hi, v);
        }
    }
    if (!have_axis || same_coord(axis_lo, axis_hi)) return std::nullopt;

    std::optional<AxisDelta> out;
    for (const SweepRecord& lo_rec : records) {
        const double moving =
            moving_is_se ? lo_rec.reference.sensitivity.value() : lo_rec.reference.specificity.value();
        if (!same_coord(moving, axis_lo)) continue;
        const double fixed_other =
            moving_is_se ? lo_rec.reference.specificity.value() : lo_rec.reference.sensitivity.value();
        // find the matching record at the high end of the moving axis
        for (const SweepRecord& hi_rec : records) {
            if (!same_coord(hi_rec.prevalence, lo_rec.prevalence)) continue;
            if (!same_coord(hi_rec.model.sensitivity.value(), lo_rec.model.sensitivity.value()) ||
                !same_coord(hi_rec.model.specificity.value(), lo_rec.model.specificity.value())) {
                continue;
            }
            const double hi_moving = moving_is_se ? hi_rec.reference.sensitivity.value()
                                                  : hi_rec.reference.specificity.value();
            const double hi_fixed = moving_is_se ? hi_rec.reference.specificity.value()
                                                 : hi_rec.reference.sensitivity.value();
            if (!same_coord(hi_moving, axis_hi) || !same_coord(hi_fixed, fixed_other)) continue;

            const double lo_range = range_of(sens_metric ? lo_rec.sens_bounds : lo_rec.spec_bounds);
            const double hi_range = range_of(sens_metric ? hi_rec.sens_bounds : hi_rec.spec_bounds);
            if (std::isnan(lo_range) || std::isnan(hi_range)) continue;
            const double shrink = lo_range - hi_range;
            if (!out || shrink > out->shrink) {
                out = AxisDelta{shrink, fixed_other, lo_rec.prevalence, lo_rec.model};
            }
        }
    }
    return out;
}

}  // namespace

ExtremesReport summarize_extremes(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw std::invalid_argument("records: empty list");
    ExtremesReport out;
    out.sensitivity = metric_extremes(records, true);
    out.specificity = metric_extremes(records, false);
    out.sens_from_ref_se = axis_delta(records, true, true);
    out.sens_from_ref_sp = axis_delta(records, true, false);
    out.spec_from_ref_se = axis_delta(records, false, true);
    out.spec_from_ref_sp = axis_delta(records, false, false);
    return out;
}

std::optional<double> perfect_model_floor(std::int64_t n_total, Fraction prevalence,
                                          const GridAxis& grid) {
    const Cohort cohort = make_cohort(n_total, prevalence);
    const OperatingPoint perfect{Fraction(1.0), Fraction(1.0)};
    const std::vector<double> axis = grid.values();
    std::optional<double> floor;
    for (double se : axis) {
        for (double sp : axis) {
            const ObservedMetrics m =
                point_estimate(cohort, perfect, OperatingPoint{Fraction(se), Fraction(sp)});
            if (!m.sensitivity) continue;
            const double v = m.sensitivity->value();
            if (!floor || v < *floor) floor = v;
        }
    }
    return floor;
}

OracleExtrema enumerate_oracle(const Cohort& cohort, const ConfusionCounts& model_counts,
                               const ConfusionCounts& reference_counts) {
    if (cohort.n_total() > kOracleMaxTotal) {
        throw std::invalid_argument("cohort: enumeration supports at most " +
                                    std::to_string(kOracleMaxTotal) + " cases");
    }
    if (!model_counts.is_integral() || !reference_counts.is_integral()) {
        throw std::invalid_argument("counts: enumeration requires integer marginals");
    }

    const auto pos = static_cast<double>(cohort.n_positive());
    const auto neg = static_cast<double>(cohort.n_negative());
    const auto lo_pos =
        static_cast<std::int64_t>(std::max(0.0, model_counts.tp() + reference_counts.tp() - pos));
    const auto hi_pos =
        static_cast<std::int64_t>(std::min(model_counts.tp(), reference_counts.tp()));
    const auto lo_neg =
        static_cast<std::int64_t>(std::max(0.0, model_counts.fp() + reference_counts.fp() - neg));
    const auto hi_neg =
        static_cast<std::int64_t>(std::min(model_counts.fp(), reference_counts.fp()));

    OracleExtrema out;
    for (std::int64_t a = lo_pos; a <= hi_pos; ++a) {
        for (std::int64_t b = lo_neg; b <= hi_neg; ++b) {
            const ObservedMetrics m = observed_metrics(
                AgreementTable(cohort, model_counts, reference_counts,
                               static_cast<double>(a), static_cast<double>(b)));
            ++out.tables_enumerated;
            if (m.sensitivity) {
                const double v = m.sensitivity->value();
                if (!out.sens_min || v < out.sens_min->value()) out.sens_min = m.sensitivity;
                if (!out.sens_max || v > out.sens_max->value()) out.sens_max = m.sensitivity;
            }
            if (m.specificity) {
                const double v = m.specificity->value();
                if (!out.spec_min || v < out.spec_min->value()) out.spec_min = m.specificity;
                if (!out.spec_max || v > out.spec_max->value()) out.spec_max = m.specificity;
            }
        }
    }
    return out;
}

}  // namespace refnoise
