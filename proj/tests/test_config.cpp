#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "config.hpp"

using namespace refnoise;

TEST_CASE("rates accept percent or fraction, 1 means the fraction") {
    CHECK(normalize_rate(95) == 0.95);
    CHECK(normalize_rate(0.95) == 0.95);
    CHECK(normalize_rate(1.0) == 1.0);
    CHECK(normalize_rate(100) == 1.0);
    CHECK(normalize_rate(1.01) == doctest::Approx(0.0101));
}

TEST_CASE("a full config parses") {
    const std::string text =
        "# fixed-model study\n"
        "n_total  = 10000\n"
        "prevalence = 10\n"
        "prevalence = 30\n"
        "model = 95 95\n"
        "model = 0.9 0.98\n"
        "ref_lo = 90\n"
        "ref_hi = 100\n"
        "ref_step = 1\n"
        "trials = 5000\n"
        "seed = 42\n"
        "mc = on\n";
    const SweepSpec spec = parse_sweep_config(text);
    CHECK(spec.n_total == 10000);
    REQUIRE(spec.prevalences.size() == 2);
    CHECK(spec.prevalences[0] == 0.10);
    CHECK(spec.prevalences[1] == 0.30);
    REQUIRE(spec.model_points.size() == 2);
    CHECK(spec.model_points[0].sensitivity.value() == 0.95);
    CHECK(spec.model_points[1].specificity.value() == 0.98);
    CHECK(spec.reference_grid.lo == 0.90);
    CHECK(spec.reference_grid.hi == 1.00);
    CHECK(spec.reference_grid.step == 0.01);
    CHECK(spec.n_trials == 5000);
    CHECK(spec.seed == 42);
    CHECK(spec.include_mc);
    CHECK(spec.reference_grid.values().size() == 11);
}

TEST_CASE("fractional grids work without the percent rule") {
    const SweepSpec spec = parse_sweep_config("ref_lo = 0.8\nref_hi = 0.9\nref_step = 0.05\n");
    CHECK(spec.reference_grid.lo == 0.8);
    CHECK(spec.reference_grid.step == 0.05);
    CHECK(spec.reference_grid.values().size() == 3);
}

TEST_CASE("defaults survive an empty config") {
    const SweepSpec spec = parse_sweep_config("# nothing but comments\n\n");
    CHECK(spec.n_total == 10000);
    CHECK(spec.n_trials == 5000);
    CHECK(spec.reference_grid.lo == 0.90);
    CHECK_FALSE(spec.include_mc);
    CHECK(spec.prevalences.empty());
}

TEST_CASE("malformed configs name the line and field") {
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        try {
            parse_sweep_config(text);
            FAIL("expected a throw for: ", text);
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            INFO("message: ", msg);
            CHECK(msg.find(fragment) != std::string::npos);
        }
    };
    expect_error("prevalence 10\n", "line 1");
    expect_error("\nwhat = 1\n", "line 2");
    expect_error("what = 1\n", "unknown key 'what'");
    expect_error("prevalence = ten\n", "prevalence: not a number");
    expect_error("model = 95\n", "expected 2 value(s)");
    expect_error("trials = 1.5\n", "trials: not an integer");
    expect_error("mc = maybe\n", "expected on/off");
    expect_error("prevalence =\n", "empty value");
    expect_error("prevalence = 150\n", "prevalence");  // 150% is out of range
}

TEST_CASE("config files load from disk with the path in diagnostics") {
    CHECK_THROWS_AS(load_sweep_config("/nonexistent/path.cfg"), std::runtime_error);
}
