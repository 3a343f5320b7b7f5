#include "reproduce.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cohort.hpp"
#include "experiments.hpp"

namespace refnoise {

int VerificationReport::failed() const {
    int n = 0;
    for (const CheckResult& c : checks) {
        if (!c.pass) ++n;
    }
    return n;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void check_value(VerificationReport& rep, std::string name, double expected, double actual,
                 double tol, std::string detail = "") {
    rep.checks.push_back(CheckResult{std::move(name), expected, actual, tol,
                                     std::abs(actual - expected) <= tol, std::move(detail)});
}

void check_flag(VerificationReport& rep, std::string name, bool ok, std::string detail = "") {
    rep.checks.push_back(CheckResult{std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0, ok,
                                     std::move(detail)});
}

OperatingPoint op(double se, double sp) { return OperatingPoint{Fraction(se), Fraction(sp)}; }

double sens_of(const ObservedMetrics& m) {
    return m.sensitivity ? m.sensitivity->value() : std::numeric_limits<double>::quiet_NaN();
}
double spec_of(const ObservedMetrics& m) {
    return m.specificity ? m.specificity->value() : std::numeric_limits<double>::quiet_NaN();
}

// --- exact worst case at the reference scenario -------------------------

void check_worst_case(VerificationReport& rep) {
    const Cohort cohort = make_cohort(10000, Fraction(0.30));
    const ObservedMetrics worst = worst_case(cohort, op(0.80, 0.80), op(0.90, 0.90));
    check_value(rep, "worst_sens_p30_model80_ref90", 0.6176, sens_of(worst), 0.0005);
    check_value(rep, "worst_spec_p30_model80_ref90", 0.7424, spec_of(worst), 0.0005);
}

// --- error-range extrema over the 90..100% grid at 10% prevalence -------

std::vector<SweepRecord> sweep_p10_model95() {
    SweepSpec spec;
    spec.prevalences = {0.10};
    spec.model_points = {op(0.95, 0.95)};
    return run_sweep(spec);
}

void check_range_extrema(VerificationReport& rep, const std::vector<SweepRecord>& records) {
    const ExtremesReport ex = summarize_extremes(records);
    check_value(rep, "max_sens_range_p10_model95", 0.3704,
                ex.sensitivity ? ex.sensitivity->max_range : -1.0, 0.0005);
    const bool argmax_ok = ex.sensitivity &&
                           std::abs(ex.sensitivity->argmax.reference.sensitivity.value() - 0.90) < 1e-9 &&
                           std::abs(ex.sensitivity->argmax.reference.specificity.value() - 0.95) < 1e-9;
    check_flag(rep, "max_sens_range_at_ref_se90_sp95", argmax_ok,
               ex.sensitivity ? "argmax ref se=" + fmt(ex.sensitivity->argmax.reference.sensitivity.value()) +
                                    " sp=" + fmt(ex.sensitivity->argmax.reference.specificity.value())
                              : "no defined ranges");
    check_value(rep, "max_spec_range_p10_model95", 0.0610,
                ex.specificity ? ex.specificity->max_range : -1.0, 0.0010);

    check_value(rep, "sens_range_shrink_from_ref_sp", 0.237,
                ex.sens_from_ref_sp ? ex.sens_from_ref_sp->shrink : -1.0, 0.005);
    check_value(rep, "sens_range_shrink_from_ref_se", 0.060,
                ex.sens_from_ref_se ? ex.sens_from_ref_se->shrink : -1.0, 0.005);
    check_value(rep, "spec_range_shrink_from_ref_sp", 0.056,
                ex.spec_from_ref_sp ? ex.spec_from_ref_sp->shrink : -1.0, 0.005);
    check_value(rep, "spec_range_shrink_from_ref_se", 0.0075,
                ex.spec_from_ref_se ? ex.spec_from_ref_se->shrink : -1.0, 0.0025,
                "window [0.005, 0.010]");
}

// --- perfect-model collapse and floor -----------------------------------

void check_perfect_model(VerificationReport& rep) {
    const OperatingPoint perfect = op(1.0, 1.0);
    const ObservedMetrics low = point_estimate(make_cohort(10000, Fraction(0.10)), perfect,
                                               op(1.00, 0.90));
    check_value(rep, "ppv_collapse_p10_ref_se100_sp90", 0.5263, sens_of(low), 0.001);
    const ObservedMetrics high = point_estimate(make_cohort(10000, Fraction(0.90)), perfect,
                                                op(0.90, 1.00));
    check_value(rep, "npv_collapse_p90_ref_se90_sp100", 0.5263, spec_of(high), 0.001);

    const auto floor = perfect_model_floor(10000, Fraction(0.30), GridAxis{});
    check_value(rep, "perfect_model_floor_p30", 0.7941, floor.value_or(-1.0), 0.001);
}

// --- below-truth threshold on the best case -----------------------------

void check_below_truth(VerificationReport& rep) {
    const Cohort cohort = make_cohort(10000, Fraction(0.10));
    const OperatingPoint model = op(0.95, 0.95);
    bool all_below = true;
    std::string offender;
    for (const double se : GridAxis{}.values()) {
        for (const double sp : GridAxis{0.90, 0.94, 0.01}.values()) {
            const double best = sens_of(best_case(cohort, model, op(se, sp)));
            if (!(best < 0.95)) {
                all_below = false;
                offender = "ref se=" + fmt(se) + " sp=" + fmt(sp) + " best=" + fmt(best);
            }
        }
    }
    check_flag(rep, "best_sens_below_truth_ref_sp_le_94", all_below, offender);
    const double at95 = sens_of(best_case(cohort, model, op(1.00, 0.95)));
    check_flag(rep, "best_sens_above_truth_ref_se100_sp95", at95 > 0.95, "best=" + fmt(at95));
}

// --- oracle equivalence on every small integer configuration ------------

struct OracleScan {
    std::int64_t configs = 0;
    std::int64_t mismatches = 0;
    std::string first_mismatch;
};

bool same_metric(const std::optional<Fraction>& a, const std::optional<Fraction>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || a->value() == b->value();
}

// Rates in 10% steps whose product with the stratum size is an integer.
std::vector<double> integral_rates(std::int64_t stratum) {
    std::vector<double> out;
    for (int tenths = 0; tenths <= 10; ++tenths) {
        if ((stratum * tenths) % 10 == 0) out.push_back(tenths / 10.0);
    }
    return out;
}

// The equivalence scan stays within 60 cases; the oracle itself accepts
// up to kOracleMaxTotal for ad-hoc adjudication.
constexpr std::int64_t kScanMaxTotal = 60;

OracleScan oracle_equivalence_scan() {
    OracleScan scan;
    for (std::int64_t n = 1; n <= kScanMaxTotal; ++n) {
        for (int ptenths = 0; ptenths <= 10; ++ptenths) {
            if ((n * ptenths) % 10 != 0) continue;
            const std::int64_t n_pos = n * ptenths / 10;
            const Cohort cohort(n_pos, n - n_pos);
            const std::vector<double> se_rates = integral_rates(cohort.n_positive());
            const std::vector<double> sp_rates = integral_rates(cohort.n_negative());
            for (double mse : se_rates) {
                for (double msp : sp_rates) {
                    const ConfusionCounts model = confusion_counts(cohort, op(mse, msp));
                    for (double rse : se_rates) {
                        for (double rsp : sp_rates) {
                            const ConfusionCounts ref = confusion_counts(cohort, op(rse, rsp));
                            const OracleExtrema oracle = enumerate_oracle(cohort, model, ref);
                            const ObservedMetrics best =
                                observed_metrics(max_overlap_table(cohort, model, ref));
                            const ObservedMetrics worst =
                                observed_metrics(min_overlap_table(cohort, model, ref));
                            ++scan.configs;
                            const bool ok = same_metric(oracle.sens_max, best.sensitivity) &&
                                            same_metric(oracle.spec_max, best.specificity) &&
                                            same_metric(oracle.sens_min, worst.sensitivity) &&
                                            same_metric(oracle.spec_min, worst.specificity);
                            if (!ok) {
                                ++scan.mismatches;
                                if (scan.first_mismatch.empty()) {
                                    scan.first_mismatch =
                                        "n_pos=" + std::to_string(cohort.n_positive()) +
                                        " n_neg=" + std::to_string(cohort.n_negative()) +
                                        " model=" + fmt(mse) + "/" + fmt(msp) + " ref=" +
                                        fmt(rse) + "/" + fmt(rsp);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return scan;
}

void check_oracle(VerificationReport& rep) {
    const OracleScan scan = oracle_equivalence_scan();
    check_value(rep, "oracle_equivalence_mismatches", 0.0,
                static_cast<double>(scan.mismatches), 0.0,
                std::to_string(scan.configs) + " configurations" +
                    (scan.first_mismatch.empty() ? "" : ", first: " + scan.first_mismatch));
}

// --- Monte Carlo contracts ----------------------------------------------

bool identical_summary(const MetricSummary& a, const MetricSummary& b) {
    auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
    return bits(a.min) == bits(b.min) && bits(a.max) == bits(b.max) &&
           bits(a.mean) == bits(b.mean) && bits(a.stddev) == bits(b.stddev) &&
           bits(a.q025) == bits(b.q025) && bits(a.median) == bits(b.median) &&
           bits(a.q975) == bits(b.q975) && a.defined_trials == b.defined_trials;
}

bool identical(const McSummary& a, const McSummary& b) {
    return identical_summary(a.sensitivity, b.sensitivity) &&
           identical_summary(a.specificity, b.specificity) && a.n_trials == b.n_trials &&
           a.seed == b.seed;
}

void check_monte_carlo(VerificationReport& rep, std::uint64_t seed) {
    const Cohort cohort = make_cohort(10000, Fraction(0.10));
    const OperatingPoint model = op(0.95, 0.95);
    const TrialConfig config{cohort, model, op(0.90, 0.95), 5000, seed};

    const McSummary serial = run_trials(config, 1);
    const McSummary again = run_trials(config, 1);
    const McSummary wide = run_trials(config, 4);
    check_flag(rep, "mc_bit_identical_reruns_and_workers",
               identical(serial, again) && identical(serial, wide));

    const double point = sens_of(point_estimate(cohort, model, config.reference));
    const double stderr_mean =
        serial.sensitivity.stddev / std::sqrt(static_cast<double>(serial.sensitivity.defined_trials));
    check_value(rep, "mc_mean_matches_point_estimate", point, serial.sensitivity.mean,
                4.0 * stderr_mean, "4 standard errors");

    const BoundsPair bounds = metric_bounds(cohort, model, config.reference);
    const double worst = bounds.sensitivity->worst().value();
    const double best = bounds.sensitivity->best().value();
    check_flag(rep, "mc_envelope_within_bounds_slack_002",
               serial.sensitivity.min >= worst - 0.02 && serial.sensitivity.max <= best + 0.02,
               "mc [" + fmt(serial.sensitivity.min) + ", " + fmt(serial.sensitivity.max) +
                   "] vs bounds [" + fmt(worst) + ", " + fmt(best) + "]");

    bool all_below = true;
    std::string offender;
    std::uint64_t cell = 0;
    for (const double se : GridAxis{}.values()) {
        for (const double sp : GridAxis{0.90, 0.94, 0.01}.values()) {
            const TrialConfig cfg{cohort, model, op(se, sp), 5000,
                                  RandomStream::derive(seed, cell++)};
            const McSummary mc = run_trials(cfg, 4);
            if (!(mc.sensitivity.max < 0.95)) {
                all_below = false;
                offender = "ref se=" + fmt(se) + " sp=" + fmt(sp) + " mc max=" +
                           fmt(mc.sensitivity.max);
            }
        }
    }
    check_flag(rep, "mc_max_sens_below_truth_ref_sp_le_94", all_below, offender);
}

// --- mirror symmetry ------------------------------------------------------

void check_mirror(VerificationReport& rep) {
    RandomStream gen(0x5eedULL, 0);
    double max_diff = 0.0;
    auto diff = [&](const std::optional<Fraction>& a, const std::optional<Fraction>& b) {
        if (a.has_value() != b.has_value()) return 1.0;
        return a ? std::abs(a->value() - b->value()) : 0.0;
    };
    for (int i = 0; i < 100; ++i) {
        const auto n_pos = static_cast<std::int64_t>(gen.next_u64() % 400);
        auto n_neg = static_cast<std::int64_t>(gen.next_u64() % 400);
        if (n_pos + n_neg == 0) n_neg = 1;  // keep the cohort non-empty
        const Cohort cohort(n_pos, n_neg);
        const Cohort mirror(n_neg, n_pos);
        const OperatingPoint m = op(gen.next_unit(), gen.next_unit());
        const OperatingPoint r = op(gen.next_unit(), gen.next_unit());
        const OperatingPoint m_swap = op(m.specificity.value(), m.sensitivity.value());
        const OperatingPoint r_swap = op(r.specificity.value(), r.sensitivity.value());

        using Estimator = ObservedMetrics (*)(const Cohort&, const OperatingPoint&,
                                              const OperatingPoint&);
        for (Estimator est : {static_cast<Estimator>(point_estimate),
                              static_cast<Estimator>(best_case),
                              static_cast<Estimator>(worst_case)}) {
            const ObservedMetrics direct = est(cohort, m, r);
            const ObservedMetrics swapped = est(mirror, m_swap, r_swap);
            max_diff = std::max(max_diff, diff(direct.sensitivity, swapped.specificity));
            max_diff = std::max(max_diff, diff(direct.specificity, swapped.sensitivity));
        }
    }
    check_value(rep, "mirror_symmetry_max_abs_diff", 0.0, max_diff, 1e-12,
                "100 randomized configurations");
}

// --- documented discrepancies (reported, never asserted) -----------------

void collect_notes(VerificationReport& rep) {
    const Cohort c30 = make_cohort(10000, Fraction(0.30));
    const ObservedMetrics best = best_case(c30, op(0.80, 0.80), op(0.90, 0.90));
    rep.notes.push_back(
        "best-case at prevalence 30%, model 80/80, reference 90/90: quoted 81.6% sensitivity / "
        "95.2% specificity is not attainable from these marginals; the enumeration-certified "
        "maxima are " + fmt(sens_of(best)) + " and " + fmt(spec_of(best)) +
        " (no single agreement table yields the quoted pair, and 95.2% exceeds the attainable "
        "specificity maximum).");

    const OperatingPoint perfect = op(1.0, 1.0);
    const Cohort c10 = make_cohort(10000, Fraction(0.10));
    const double at90 = sens_of(point_estimate(c10, perfect, op(1.00, 0.90)));
    const double at95 = sens_of(point_estimate(c10, perfect, op(1.00, 0.95)));
    rep.notes.push_back(
        "the ~53% observed sensitivity for a perfect model at 10% prevalence arises at reference "
        "specificity 90% (" + fmt(at90) + "), not 95% (" + fmt(at95) +
        "); the 95% attribution is treated as an erratum.");

    // largest reference specificity at which the whole grid's best case
    // stays below the true 95% sensitivity, at 30% prevalence
    const OperatingPoint model = op(0.95, 0.95);
    double threshold = 0.0;
    for (const double sp : GridAxis{}.values()) {
        bool all_below = true;
        for (const double se : GridAxis{}.values()) {
            if (!(sens_of(best_case(c30, model, op(se, sp))) < 0.95)) all_below = false;
        }
        if (all_below) threshold = std::max(threshold, sp);
    }
    rep.notes.push_back(
        "at 30% prevalence (model 95/95) the computed all-configurations-below-truth threshold "
        "for estimated sensitivity is reference specificity <= " + fmt(threshold) +
        "; the quoted 'below 93%' matches this under a strict reading, and a 94% variant of the "
        "claim is not supported by the bound formulas.");

    double min_point_spec = 1.0, min_worst_spec = 1.0;
    for (const double se : GridAxis{}.values()) {
        for (const double sp : GridAxis{}.values()) {
            min_point_spec = std::min(min_point_spec,
                                      spec_of(point_estimate(c30, model, op(se, sp))));
            min_worst_spec = std::min(min_worst_spec,
                                      spec_of(worst_case(c30, model, op(se, sp))));
        }
    }
    rep.notes.push_back(
        "at 30% prevalence (model 95/95) observed specificity does not stay above 95.5% across "
        "the grid: the independence point estimate reaches " + fmt(min_point_spec) +
        " and the worst case " + fmt(min_worst_spec) + ".");
}

}  // namespace

VerificationReport run_verification(std::uint64_t mc_seed) {
    VerificationReport rep;
    check_worst_case(rep);
    check_range_extrema(rep, sweep_p10_model95());
    check_perfect_model(rep);
    check_below_truth(rep);
    check_oracle(rep);
    check_monte_carlo(rep, mc_seed);
    check_mirror(rep);
    collect_notes(rep);
    return rep;
}

std::string format_verification(const VerificationReport& report) {
    std::ostringstream out;
    std::size_t width = 0;
    for (const CheckResult& c : report.checks) width = std::max(width, c.name.size());
    for (const CheckResult& c : report.checks) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
            << std::string(width - c.name.size() + 2, ' ') << "expected " << fmt(c.expected)
            << "  actual " << fmt(c.actual) << "  tol " << fmt(c.tolerance);
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << '\n';
    }
    out << '\n' << "documented discrepancies (informational, never failures):" << '\n';
    for (const std::string& n : report.notes) out << "  note: " << n << '\n';
    out << '\n'
        << (report.all_pass() ? "verification PASSED" : "verification FAILED") << " ("
        << report.checks.size() - static_cast<std::size_t>(report.failed()) << "/"
        << report.checks.size() << " checks)" << '\n';
    return out.str();
}

}  // namespace refnoise
