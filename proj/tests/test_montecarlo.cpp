#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cohort.hpp"
#include "experiments.hpp"
#include "montecarlo.hpp"

using namespace refnoise;

namespace {

OperatingPoint op(double se, double sp) { return OperatingPoint{Fraction(se), Fraction(sp)}; }

bool identical(const MetricSummary& a, const MetricSummary& b) {
    auto eq = [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    return eq(a.min, b.min) && eq(a.max, b.max) && eq(a.mean, b.mean) &&
           eq(a.stddev, b.stddev) && eq(a.q025, b.q025) && eq(a.median, b.median) &&
           eq(a.q975, b.q975) && a.defined_trials == b.defined_trials;
}

}  // namespace

TEST_CASE("degenerate operating points label deterministically") {
    const Cohort cohort(40, 60);
    RandomStream stream(1, 0);
    for (int i = 0; i < 10; ++i) {
        const ConfusionCounts all = sample_labels(cohort, op(1.0, 1.0), stream);
        CHECK(all.tp() == 40.0);
        CHECK(all.fn() == 0.0);
        CHECK(all.tn() == 60.0);
        CHECK(all.fp() == 0.0);

        const ConfusionCounts none = sample_labels(cohort, op(0.0, 0.0), stream);
        CHECK(none.tp() == 0.0);
        CHECK(none.fn() == 40.0);
        CHECK(none.tn() == 0.0);
        CHECK(none.fp() == 60.0);
    }
}

TEST_CASE("sampled labels have binomial moments") {
    const Cohort cohort(1000, 9000);
    const OperatingPoint point = op(0.9, 0.9);
    const int trials = 5000;
    double tp_sum = 0.0;
    for (int i = 0; i < trials; ++i) {
        RandomStream stream(99, static_cast<std::uint64_t>(i));
        const ConfusionCounts c = sample_labels(cohort, point, stream);
        CHECK(c.positives() == 1000.0);
        CHECK(c.negatives() == 9000.0);
        CHECK(c.is_integral());
        tp_sum += c.tp();
    }
    const double stderr_mean = std::sqrt(1000.0 * 0.9 * 0.1 / trials);
    CHECK(std::abs(tp_sum / trials - 900.0) < 4.0 * stderr_mean);
}

TEST_CASE("a perfect reference reveals the realized model labels") {
    const TrialConfig config{Cohort(500, 1500), op(0.85, 0.90), op(1.0, 1.0), 1, 7};
    for (std::int64_t t = 0; t < 200; ++t) {
        const ObservedMetrics m = run_trial(config, t);
        // against a perfect reference the observed metrics are the model's
        // empirical rates: integers over the stratum sizes
        const double tp = m.sensitivity->value() * 500.0;
        const double tn = m.specificity->value() * 1500.0;
        CHECK(std::abs(tp - std::round(tp)) < 1e-9);
        CHECK(std::abs(tn - std::round(tn)) < 1e-9);
    }
}

TEST_CASE("perfect model observed sensitivity sits on the 1000/(1000+fp) lattice") {
    const TrialConfig config{Cohort(1000, 9000), op(1.0, 1.0), op(1.0, 0.90), 1, 11};
    double fp_sum = 0.0;
    const int trials = 2000;
    for (std::int64_t t = 0; t < trials; ++t) {
        const ObservedMetrics m = run_trial(config, t);
        const double fp = 1000.0 / m.sensitivity->value() - 1000.0;
        CHECK(std::abs(fp - std::round(fp)) < 1e-6);
        CHECK(fp >= 0.0);
        fp_sum += std::round(fp);
    }
    // fp ~ Binomial(9000, 0.10)
    const double stderr_mean = std::sqrt(9000.0 * 0.1 * 0.9 / trials);
    CHECK(std::abs(fp_sum / trials - 900.0) < 4.0 * stderr_mean);
}

TEST_CASE("everything perfect scores 1.0 in every trial") {
    const TrialConfig config{Cohort(100, 300), op(1.0, 1.0), op(1.0, 1.0), 50, 3};
    const McSummary s = run_trials(config);
    CHECK(s.sensitivity.min == 1.0);
    CHECK(s.sensitivity.max == 1.0);
    CHECK(s.specificity.min == 1.0);
    CHECK(s.specificity.max == 1.0);
    CHECK(s.sensitivity.defined_trials == 50);
}

TEST_CASE("single trial collapses the summary") {
    const TrialConfig config{Cohort(1000, 9000), op(0.95, 0.95), op(0.9, 0.9), 1, 42};
    const McSummary s = run_trials(config);
    CHECK(s.sensitivity.min == s.sensitivity.max);
    CHECK(s.sensitivity.min == s.sensitivity.mean);
    CHECK(s.sensitivity.stddev == 0.0);
    CHECK(s.sensitivity.median == s.sensitivity.mean);
}

TEST_CASE("summaries are bit-identical across reruns and worker counts") {
    const TrialConfig config{Cohort(1000, 9000), op(0.95, 0.95), op(0.90, 0.95), 2000, 42};
    const McSummary serial = run_trials(config, 1);
    const McSummary rerun = run_trials(config, 1);
    const McSummary threaded = run_trials(config, 8);
    CHECK(identical(serial.sensitivity, rerun.sensitivity));
    CHECK(identical(serial.specificity, rerun.specificity));
    CHECK(identical(serial.sensitivity, threaded.sensitivity));
    CHECK(identical(serial.specificity, threaded.specificity));
    CHECK(serial.seed == 42);
    CHECK(serial.n_trials == 2000);

    const TrialConfig other{Cohort(1000, 9000), op(0.95, 0.95), op(0.90, 0.95), 2000, 43};
    CHECK_FALSE(identical(serial.sensitivity, run_trials(other, 1).sensitivity));
}

TEST_CASE("a metric undefined in every trial stays undefined") {
    // all-positive cohort and a reference that flags everything positive:
    // no trial ever has a reference negative
    const TrialConfig config{Cohort(50, 0), op(0.8, 1.0), op(1.0, 1.0), 25, 5};
    const McSummary s = run_trials(config);
    CHECK(s.specificity.defined_trials == 0);
    CHECK_FALSE(s.specificity.defined());
    CHECK(std::isnan(s.specificity.mean));
    CHECK(s.sensitivity.defined_trials == 25);
}

TEST_CASE("summary quantiles are ordered within [min, max]") {
    const TrialConfig config{Cohort(1000, 9000), op(0.95, 0.95), op(0.92, 0.93), 3000, 1234};
    const McSummary s = run_trials(config, 4);
    for (const MetricSummary* m : {&s.sensitivity, &s.specificity}) {
        CHECK(m->min <= m->q025);
        CHECK(m->q025 <= m->median);
        CHECK(m->median <= m->q975);
        CHECK(m->q975 <= m->max);
        CHECK(m->defined_trials == 3000);
    }
}

TEST_CASE("monte carlo tracks the analytic machinery at the canonical cell") {
    const Cohort cohort = make_cohort(10000, Fraction(0.10));
    const OperatingPoint model = op(0.95, 0.95);
    const OperatingPoint reference = op(0.90, 0.95);
    const TrialConfig config{cohort, model, reference, 5000, 42};
    const McSummary s = run_trials(config, 4);

    const ObservedMetrics point = point_estimate(cohort, model, reference);
    const double stderr_mean =
        s.sensitivity.stddev / std::sqrt(static_cast<double>(s.sensitivity.defined_trials));
    CHECK(std::abs(s.sensitivity.mean - point.sensitivity->value()) < 4.0 * stderr_mean);

    const ObservedMetrics best = best_case(cohort, model, reference);
    const ObservedMetrics worst = worst_case(cohort, model, reference);
    CHECK(s.sensitivity.min >= worst.sensitivity->value() - 0.02);
    CHECK(s.sensitivity.max <= best.sensitivity->value() + 0.02);
    CHECK(s.specificity.min >= worst.specificity->value() - 0.02);
    CHECK(s.specificity.max <= best.specificity->value() + 0.02);

    // reference specificity below 95% drags the whole empirical
    // distribution under the model's true sensitivity
    const TrialConfig biased{cohort, model, op(0.95, 0.94), 5000, 42};
    CHECK(run_trials(biased, 4).sensitivity.max < 0.95);
}

TEST_CASE("grid-wide bound tracking on the fixed-model study") {
    // Across the whole 11x11 reference grid at 10% prevalence the MC mean
    // converges to the independence point estimate, and the empirical
    // envelope stays within the attainable interval plus the fluctuation
    // of the trial extremes (6 per-trial standard deviations covers the
    // min/max of 5000 draws with lots of headroom).
    const Cohort cohort = make_cohort(10000, Fraction(0.10));
    const OperatingPoint model = op(0.95, 0.95);
    const auto axis = GridAxis{}.values();
    std::uint64_t cell = 0;
    for (double se : axis) {
        for (double sp : axis) {
            const OperatingPoint reference = op(se, sp);
            const TrialConfig cfg{cohort, model, reference, 5000,
                                  RandomStream::derive(42, cell++)};
            const McSummary s = run_trials(cfg, 4);
            CAPTURE(se);
            CAPTURE(sp);

            const ObservedMetrics point = point_estimate(cohort, model, reference);
            const ObservedMetrics best = best_case(cohort, model, reference);
            const ObservedMetrics worst = worst_case(cohort, model, reference);
            for (bool sens_metric : {true, false}) {
                const MetricSummary& m = sens_metric ? s.sensitivity : s.specificity;
                const auto& pt = sens_metric ? point.sensitivity : point.specificity;
                const auto& hi = sens_metric ? best.sensitivity : best.specificity;
                const auto& lo = sens_metric ? worst.sensitivity : worst.specificity;
                REQUIRE(m.defined());
                REQUIRE(pt.has_value());
                const double se_mean =
                    m.stddev / std::sqrt(static_cast<double>(m.defined_trials));
                CHECK(std::abs(m.mean - pt->value()) <= 4.0 * se_mean);
                CHECK(m.min >= lo->value() - 6.0 * m.stddev);
                CHECK(m.max <= hi->value() + 6.0 * m.stddev);
            }
        }
    }
}

TEST_CASE("invalid trial counts are rejected") {
    const TrialConfig config{Cohort(10, 10), op(0.9, 0.9), op(0.9, 0.9), 0, 1};
    CHECK_THROWS(run_trials(config));
}
