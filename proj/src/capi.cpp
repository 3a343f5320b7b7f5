#include "refnoise.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "cohort.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "fsutil.hpp"
#include "montecarlo.hpp"
#include "report.hpp"
#include "reproduce.hpp"

using namespace refnoise;

extern "C" {
struct rn_sweep {
    SweepSpec spec;
};
struct rn_records {
    std::vector<SweepRecord> records;
};
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void set_error(char* err, size_t err_len, const char* what) {
    if (err == nullptr || err_len == 0) return;
    std::strncpy(err, what, err_len - 1);
    err[err_len - 1] = '\0';
}

// Runs fn, translating exceptions into status codes + message.
template <typename Fn>
rn_status guarded(char* err, size_t err_len, Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        set_error(err, err_len, e.what());
        const bool too_large = std::strstr(e.what(), "enumeration supports") != nullptr;
        return too_large ? RN_ERR_TOO_LARGE : RN_ERR_INVALID;
    } catch (const std::runtime_error& e) {
        set_error(err, err_len, e.what());
        return RN_ERR_IO;
    } catch (const std::bad_alloc&) {
        set_error(err, err_len, "out of memory");
        return RN_ERR_IO;
    } catch (const std::exception& e) {
        set_error(err, err_len, e.what());
        return RN_ERR_INVALID;
    }
}

Fraction rate_arg(double raw, const char* field) {
    return validate_fraction(normalize_rate(raw), field);
}

double opt_value(const std::optional<Fraction>& f) { return f ? f->value() : kNaN; }

rn_bounds bounds_struct(const ObservedMetrics& point, const BoundsPair& bounds) {
    rn_bounds out;
    out.point_sens = opt_value(point.sensitivity);
    out.point_spec = opt_value(point.specificity);
    if (bounds.sensitivity) {
        out.best_sens = bounds.sensitivity->best().value();
        out.worst_sens = bounds.sensitivity->worst().value();
        out.range_sens = bounds.sensitivity->range().value();
    } else {
        out.best_sens = out.worst_sens = out.range_sens = kNaN;
    }
    if (bounds.specificity) {
        out.best_spec = bounds.specificity->best().value();
        out.worst_spec = bounds.specificity->worst().value();
        out.range_spec = bounds.specificity->range().value();
    } else {
        out.best_spec = out.worst_spec = out.range_spec = kNaN;
    }
    return out;
}

rn_metric_summary summary_struct(const MetricSummary& s) {
    return rn_metric_summary{s.min, s.max, s.mean, s.stddev, s.q025, s.median, s.q975,
                             s.defined_trials};
}

rn_mc_summary mc_struct(const McSummary& mc) {
    return rn_mc_summary{summary_struct(mc.sensitivity), summary_struct(mc.specificity),
                         mc.n_trials, mc.seed};
}

bool coord_match(double a, double b) { return std::abs(a - b) < 1e-6; }

template <typename Fn>
rn_status with_sweep(rn_sweep* sweep, char* err, size_t err_len, Fn&& fn) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (sweep == nullptr) throw std::invalid_argument("sweep: null handle");
        fn(sweep->spec);
        return RN_OK;
    });
}

}  // namespace

extern "C" {

const char* rn_version(void) { return "1.0.0"; }

rn_status rn_compute_bounds(int64_t n_total, double prevalence, double model_se, double model_sp,
                            double ref_se, double ref_sp, rn_bounds* out, char* err,
                            size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (out == nullptr) throw std::invalid_argument("out: null");
        const Cohort cohort = make_cohort(n_total, rate_arg(prevalence, "prevalence"));
        const OperatingPoint model{rate_arg(model_se, "model_se"), rate_arg(model_sp, "model_sp")};
        const OperatingPoint ref{rate_arg(ref_se, "ref_se"), rate_arg(ref_sp, "ref_sp")};
        *out = bounds_struct(point_estimate(cohort, model, ref),
                             metric_bounds(cohort, model, ref));
        return RN_OK;
    });
}

rn_status rn_run_monte_carlo(int64_t n_total, double prevalence, double model_se, double model_sp,
                             double ref_se, double ref_sp, int64_t n_trials, uint64_t seed,
                             int threads, rn_mc_summary* out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (out == nullptr) throw std::invalid_argument("out: null");
        const Cohort cohort = make_cohort(n_total, rate_arg(prevalence, "prevalence"));
        const TrialConfig config{cohort,
                                 OperatingPoint{rate_arg(model_se, "model_se"),
                                                rate_arg(model_sp, "model_sp")},
                                 OperatingPoint{rate_arg(ref_se, "ref_se"),
                                                rate_arg(ref_sp, "ref_sp")},
                                 n_trials, seed};
        *out = mc_struct(run_trials(config, threads));
        return RN_OK;
    });
}

rn_status rn_run_oracle(int64_t n_total, double prevalence, double model_se, double model_sp,
                        double ref_se, double ref_sp, rn_oracle_result* out, char* err,
                        size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (out == nullptr) throw std::invalid_argument("out: null");
        const Cohort cohort = make_cohort(n_total, rate_arg(prevalence, "prevalence"));
        const OperatingPoint model{rate_arg(model_se, "model_se"), rate_arg(model_sp, "model_sp")};
        const OperatingPoint ref{rate_arg(ref_se, "ref_se"), rate_arg(ref_sp, "ref_sp")};
        const ConfusionCounts model_counts = confusion_counts(cohort, model);
        const ConfusionCounts ref_counts = confusion_counts(cohort, ref);
        const OracleExtrema oracle = enumerate_oracle(cohort, model_counts, ref_counts);

        out->sens_min = opt_value(oracle.sens_min);
        out->sens_max = opt_value(oracle.sens_max);
        out->spec_min = opt_value(oracle.spec_min);
        out->spec_max = opt_value(oracle.spec_max);
        out->tables_enumerated = oracle.tables_enumerated;

        const ObservedMetrics best = best_case(cohort, model, ref);
        const ObservedMetrics worst = worst_case(cohort, model, ref);
        auto same = [](const std::optional<Fraction>& a, const std::optional<Fraction>& b) {
            if (a.has_value() != b.has_value()) return false;
            return !a || a->value() == b->value();
        };
        out->matches_closed_form =
            (same(oracle.sens_max, best.sensitivity) && same(oracle.spec_max, best.specificity) &&
             same(oracle.sens_min, worst.sensitivity) && same(oracle.spec_min, worst.specificity))
                ? 1
                : 0;
        return RN_OK;
    });
}

rn_sweep* rn_sweep_new(void) {
    auto* sweep = new (std::nothrow) rn_sweep;
    return sweep;
}

void rn_sweep_free(rn_sweep* sweep) { delete sweep; }

rn_status rn_sweep_set_n_total(rn_sweep* sweep, int64_t n_total, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) {
        if (n_total < 1) throw std::invalid_argument("n_total: must be at least 1");
        s.n_total = n_total;
    });
}

rn_status rn_sweep_add_prevalence(rn_sweep* sweep, double prevalence, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) {
        s.prevalences.push_back(rate_arg(prevalence, "prevalence").value());
    });
}

rn_status rn_sweep_add_model(rn_sweep* sweep, double se, double sp, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) {
        s.model_points.push_back(
            OperatingPoint{rate_arg(se, "model_se"), rate_arg(sp, "model_sp")});
    });
}

rn_status rn_sweep_set_grid(rn_sweep* sweep, double lo, double hi, double step, char* err,
                            size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) {
        const bool percent = lo > 1.0 || hi > 1.0;
        GridAxis axis{percent ? lo / 100.0 : lo, percent ? hi / 100.0 : hi,
                      percent ? step / 100.0 : normalize_rate(step)};
        axis.values();  // validate eagerly so the caller hears about it here
        s.reference_grid = axis;
    });
}

rn_status rn_sweep_set_trials(rn_sweep* sweep, int64_t n_trials, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) {
        if (n_trials < 1) throw std::invalid_argument("trials: must be at least 1");
        s.n_trials = n_trials;
    });
}

rn_status rn_sweep_set_seed(rn_sweep* sweep, uint64_t seed, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) { s.seed = seed; });
}

rn_status rn_sweep_set_monte_carlo(rn_sweep* sweep, int enabled, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len,
                      [&](SweepSpec& s) { s.include_mc = enabled != 0; });
}

rn_status rn_sweep_load_config(rn_sweep* sweep, const char* path, char* err, size_t err_len) {
    return with_sweep(sweep, err, err_len, [&](SweepSpec& s) {
        if (path == nullptr) throw std::invalid_argument("path: null");
        s = load_sweep_config(path);
    });
}

rn_status rn_sweep_run(const rn_sweep* sweep, int threads, rn_records** out, char* err,
                       size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (sweep == nullptr) throw std::invalid_argument("sweep: null handle");
        if (out == nullptr) throw std::invalid_argument("out: null");
        auto records = run_sweep(sweep->spec, threads);
        *out = new rn_records{std::move(records)};
        return RN_OK;
    });
}

void rn_records_free(rn_records* records) { delete records; }

int64_t rn_records_count(const rn_records* records) {
    return records == nullptr ? 0 : static_cast<int64_t>(records->records.size());
}

rn_status rn_records_get(const rn_records* records, int64_t index, rn_record* out, char* err,
                         size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (records == nullptr) throw std::invalid_argument("records: null handle");
        if (out == nullptr) throw std::invalid_argument("out: null");
        if (index < 0 || index >= rn_records_count(records)) {
            throw std::invalid_argument("index: out of range");
        }
        const SweepRecord& r = records->records[static_cast<std::size_t>(index)];
        out->n_total = r.n_total;
        out->prevalence = r.prevalence;
        out->model_se = r.model.sensitivity.value();
        out->model_sp = r.model.specificity.value();
        out->ref_se = r.reference.sensitivity.value();
        out->ref_sp = r.reference.specificity.value();
        out->metrics = bounds_struct(r.point, BoundsPair{r.sens_bounds, r.spec_bounds});
        out->has_mc = r.mc.has_value() ? 1 : 0;
        if (r.mc) {
            out->mc = mc_struct(*r.mc);
        } else {
            std::memset(&out->mc, 0, sizeof out->mc);
        }
        out->seed = r.seed;
        return RN_OK;
    });
}

rn_status rn_records_write_table(const rn_records* records, const char* path, int format,
                                 char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (records == nullptr) throw std::invalid_argument("records: null handle");
        if (path == nullptr) throw std::invalid_argument("path: null");
        if (format != RN_FORMAT_CSV && format != RN_FORMAT_JSONL) {
            throw std::invalid_argument("format: unknown");
        }
        atomic_write_file(path, emit_table(records->records, format == RN_FORMAT_CSV
                                                                 ? TableFormat::Csv
                                                                 : TableFormat::JsonLines));
        return RN_OK;
    });
}

rn_status rn_records_write_heatmap(const rn_records* records, const char* path, int metric,
                                   char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (records == nullptr) throw std::invalid_argument("records: null handle");
        if (path == nullptr) throw std::invalid_argument("path: null");
        if (metric != RN_METRIC_SENSITIVITY && metric != RN_METRIC_SPECIFICITY) {
            throw std::invalid_argument("metric: unknown");
        }
        atomic_write_file(path, emit_heatmap(records->records, metric == RN_METRIC_SENSITIVITY
                                                                   ? Metric::Sensitivity
                                                                   : Metric::Specificity));
        return RN_OK;
    });
}

rn_status rn_records_write_forest(const rn_records* records, const char* path, char* err,
                                  size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (records == nullptr) throw std::invalid_argument("records: null handle");
        if (path == nullptr) throw std::invalid_argument("path: null");
        atomic_write_file(path, emit_forest(records->records));
        return RN_OK;
    });
}

rn_status rn_records_filter(const rn_records* records, double prevalence, double model_se,
                            double model_sp, rn_records** out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (records == nullptr) throw std::invalid_argument("records: null handle");
        if (out == nullptr) throw std::invalid_argument("out: null");
        const double p = normalize_rate(prevalence);
        const double se = normalize_rate(model_se);
        const double sp = normalize_rate(model_sp);
        auto filtered = new rn_records;
        for (const SweepRecord& r : records->records) {
            if (coord_match(r.prevalence, p) && coord_match(r.model.sensitivity.value(), se) &&
                coord_match(r.model.specificity.value(), sp)) {
                filtered->records.push_back(r);
            }
        }
        *out = filtered;
        return RN_OK;
    });
}

rn_status rn_records_extremes(const rn_records* records, rn_extremes* out, char* err,
                              size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (records == nullptr) throw std::invalid_argument("records: null handle");
        if (out == nullptr) throw std::invalid_argument("out: null");
        const ExtremesReport ex = summarize_extremes(records->records);
        auto extreme = [](const std::optional<MetricExtremes>& m) {
            rn_extreme e;
            if (m) {
                e = rn_extreme{m->min_range,
                               m->max_range,
                               m->argmax.prevalence,
                               m->argmax.model.sensitivity.value(),
                               m->argmax.model.specificity.value(),
                               m->argmax.reference.sensitivity.value(),
                               m->argmax.reference.specificity.value(),
                               1};
            } else {
                e = rn_extreme{kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, 0};
            }
            return e;
        };
        auto delta = [](const std::optional<AxisDelta>& d) {
            rn_axis_delta a;
            if (d) {
                a = rn_axis_delta{d->shrink, d->fixed_other, d->prevalence,
                                  d->model.sensitivity.value(), d->model.specificity.value(), 1};
            } else {
                a = rn_axis_delta{kNaN, kNaN, kNaN, kNaN, kNaN, 0};
            }
            return a;
        };
        out->sensitivity = extreme(ex.sensitivity);
        out->specificity = extreme(ex.specificity);
        out->sens_from_ref_se = delta(ex.sens_from_ref_se);
        out->sens_from_ref_sp = delta(ex.sens_from_ref_sp);
        out->spec_from_ref_se = delta(ex.spec_from_ref_se);
        out->spec_from_ref_sp = delta(ex.spec_from_ref_sp);
        return RN_OK;
    });
}

rn_status rn_run_verification(char** text_out, int* n_checks, int* n_failed, char* err,
                              size_t err_len) {
    return guarded(err, err_len, [&]() -> rn_status {
        if (text_out == nullptr) throw std::invalid_argument("text_out: null");
        const VerificationReport report = run_verification();
        const std::string text = format_verification(report);
        char* copy = new char[text.size() + 1];
        std::memcpy(copy, text.c_str(), text.size() + 1);
        *text_out = copy;
        if (n_checks != nullptr) *n_checks = static_cast<int>(report.checks.size());
        if (n_failed != nullptr) *n_failed = report.failed();
        return RN_OK;
    });
}

void rn_string_free(char* text) { delete[] text; }

}  // extern "C"
