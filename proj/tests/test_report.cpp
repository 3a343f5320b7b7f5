#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "report.hpp"

using namespace refnoise;

namespace {

OperatingPoint op(double se, double sp) { return OperatingPoint{Fraction(se), Fraction(sp)}; }

std::vector<SweepRecord> fixed_model_records(bool with_mc = false) {
    SweepSpec spec;
    spec.prevalences = {0.10};
    spec.model_points = {op(0.95, 0.95)};
    if (with_mc) {
        spec.include_mc = true;
        spec.n_trials = 200;
        spec.reference_grid = GridAxis{0.90, 1.00, 0.05};
    }
    return run_sweep(spec, 2);
}

// minimal well-formedness: tags balance and the document is a single svg
void check_svg(const std::string& svg) {
    REQUIRE(svg.rfind("<svg", 0) == 0);
    REQUIRE(svg.find("</svg>") != std::string::npos);
    REQUIRE(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    std::vector<std::string> stack;
    std::size_t i = 0;
    while ((i = svg.find('<', i)) != std::string::npos) {
        const std::size_t end = svg.find('>', i);
        REQUIRE(end != std::string::npos);
        std::string tag = svg.substr(i + 1, end - i - 1);
        if (!tag.empty() && tag.back() == '/') {
            // self-closing
        } else if (!tag.empty() && tag.front() == '/') {
            REQUIRE_FALSE(stack.empty());
            CHECK(stack.back() == tag.substr(1));
            stack.pop_back();
        } else {
            const std::size_t sp = tag.find_first_of(" \t\n");
            stack.push_back(sp == std::string::npos ? tag : tag.substr(0, sp));
        }
        i = end + 1;
    }
    CHECK(stack.empty());
}

}  // namespace

TEST_CASE("csv schema is bit-exact") {
    const auto records = fixed_model_records();
    const std::string csv = emit_table(records, TableFormat::Csv);
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "n_total,prevalence,model_se,model_sp,ref_se,ref_sp,point_sens,point_spec,best_sens,"
          "worst_sens,range_sens,best_spec,worst_spec,range_spec,mc_min_sens,mc_max_sens,"
          "mc_mean_sens,mc_min_spec,mc_max_spec,mc_mean_spec,mc_trials,seed");

    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 122);  // header + 121 cells

    // without Monte Carlo every mc_* column is NA, seed still recorded
    const std::string first_row = csv.substr(csv.find('\n') + 1);
    CHECK(first_row.substr(0, first_row.find('\n')).find(
              "NA,NA,NA,NA,NA,NA,NA,42") != std::string::npos);
    CHECK(emit_table(records, TableFormat::Csv) == csv);  // deterministic

    CHECK_THROWS(emit_table({}, TableFormat::Csv));
}

TEST_CASE("csv round-trips at 6-decimal precision including NA") {
    const auto records = fixed_model_records(true);
    const std::string csv = emit_table(records, TableFormat::Csv);
    const auto rows = parse_table_csv(csv);
    REQUIRE(rows.size() == records.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRecord& r = records[i];
        const TableRow& row = rows[i];
        CHECK(row.n_total == r.n_total);
        CHECK(row.prevalence == doctest::Approx(r.prevalence).epsilon(1e-6));
        CHECK(row.ref_se == doctest::Approx(r.reference.sensitivity.value()).epsilon(1e-6));
        CHECK(row.ref_sp == doctest::Approx(r.reference.specificity.value()).epsilon(1e-6));
        REQUIRE(row.point_sens.has_value() == r.point.sensitivity.has_value());
        if (row.point_sens) {
            CHECK(*row.point_sens ==
                  doctest::Approx(r.point.sensitivity->value()).epsilon(5e-7));
        }
        REQUIRE(row.range_sens.has_value() == r.sens_bounds.has_value());
        if (row.range_sens) {
            CHECK(std::abs(*row.range_sens - r.sens_bounds->range().value()) < 5.1e-7);
        }
        REQUIRE(row.mc_trials.has_value());
        CHECK(*row.mc_trials == 200);
        REQUIRE(row.mc_mean_sens.has_value());
        CHECK(std::abs(*row.mc_mean_sens - r.mc->sensitivity.mean) < 5.1e-7);
        CHECK(row.seed == r.seed);
    }

    CHECK_THROWS(parse_table_csv("not,a,header\n1,2,3\n"));
}

TEST_CASE("undefined metrics serialize as NA in the right columns") {
    // prevalence 1.0 with a perfect-sensitivity reference: nothing is
    // reference-negative, so every specificity column is NA
    SweepSpec spec;
    spec.prevalences = {1.0};
    spec.model_points = {op(0.95, 0.95)};
    spec.reference_grid = GridAxis{1.0, 1.0, 0.01};
    const auto records = run_sweep(spec);
    REQUIRE(records.size() == 1);
    const std::string csv = emit_table(records, TableFormat::Csv);
    const std::string row = csv.substr(csv.find('\n') + 1);
    // point_spec, best_spec, worst_spec, range_spec all NA; sensitivity defined
    CHECK(row.find(",0.950000,NA,") != std::string::npos);      // point_sens, point_spec
    CHECK(row.find("0.950000,0.950000,0.000000,NA,NA,NA,") != std::string::npos);
    const auto rows = parse_table_csv(csv);
    CHECK_FALSE(rows[0].point_spec.has_value());
    CHECK(rows[0].point_sens.has_value());
}

TEST_CASE("jsonl mirrors the csv fields") {
    const auto records = fixed_model_records();
    const std::string jsonl = emit_table(records, TableFormat::JsonLines);
    const std::string first = jsonl.substr(0, jsonl.find('\n'));
    CHECK(first.rfind("{\"n_total\":10000,\"prevalence\":0.1,", 0) == 0);
    CHECK(first.find("\"mc_trials\":null") != std::string::npos);
    CHECK(first.find("\"seed\":42") != std::string::npos);
    std::size_t lines = 0;
    for (char c : jsonl) lines += c == '\n';
    CHECK(lines == 121);
}

TEST_CASE("heatmap renders the perfect-model collapse") {
    SweepSpec spec;
    spec.prevalences = {0.10};
    spec.model_points = {op(1.0, 1.0)};
    const auto records = run_sweep(spec);
    const std::string svg = emit_heatmap(records, Metric::Sensitivity);
    check_svg(svg);
    CHECK(svg.find(">52.6<") != std::string::npos);   // ref (100, 90) cell
    CHECK(svg.find(">100.0<") != std::string::npos);  // perfect-reference cell
    CHECK(svg.find("reference specificity (%)") != std::string::npos);
    CHECK(svg.find("prevalence 10%") != std::string::npos);

    SweepSpec spec30;
    spec30.prevalences = {0.30};
    spec30.model_points = {op(1.0, 1.0)};
    const std::string svg30 = emit_heatmap(run_sweep(spec30), Metric::Sensitivity);
    CHECK(svg30.find(">79.4<") != std::string::npos);  // grid minimum
}

TEST_CASE("heatmap clamps and marks values below the scale anchor") {
    SweepSpec spec;
    spec.prevalences = {0.05};
    spec.model_points = {op(1.0, 1.0)};
    const auto records = run_sweep(spec);  // PPV at (90, 90) = 450/(450+950) = 0.3214
    const std::string svg = emit_heatmap(records, Metric::Sensitivity);
    CHECK(svg.find(">32.1*<") != std::string::npos);
    CHECK(svg.find("below the 50% scale anchor") != std::string::npos);
}

TEST_CASE("heatmap shows NA cells for undefined metrics") {
    SweepSpec spec;
    spec.prevalences = {0.0};
    spec.model_points = {op(1.0, 1.0)};
    const auto records = run_sweep(spec);  // nothing is truly positive
    const std::string svg = emit_heatmap(records, Metric::Sensitivity);
    check_svg(svg);
    CHECK(svg.find(">NA<") != std::string::npos);  // ref (se, 100) cells flag nothing
}

TEST_CASE("heatmap rejects bad inputs with the offending cells named") {
    auto records = fixed_model_records();
    CHECK_THROWS(emit_heatmap({}, Metric::Sensitivity));

    auto incomplete = records;
    incomplete.erase(incomplete.begin() + 5);  // drop ref (0.90, 0.95)
    try {
        emit_heatmap(incomplete, Metric::Sensitivity);
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("missing") != std::string::npos);
        CHECK(msg.find("0.900000") != std::string::npos);
        CHECK(msg.find("0.950000") != std::string::npos);
    }

    auto mixed = fixed_model_records();
    SweepSpec other;
    other.prevalences = {0.30};
    other.model_points = {op(0.95, 0.95)};
    const auto extra = run_sweep(other);
    mixed.insert(mixed.end(), extra.begin(), extra.end());
    CHECK_THROWS(emit_heatmap(mixed, Metric::Sensitivity));
}

TEST_CASE("forest plot carries intervals, truth rule and emphasis") {
    const auto records = fixed_model_records(true);
    const std::string svg = emit_forest(records);
    check_svg(svg);
    // dashed rule at the true metric
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    // MC bars in both panel colors
    CHECK(svg.find("#d62728") != std::string::npos);
    CHECK(svg.find("#2ca02c") != std::string::npos);
    // the emphasized (widest-range) sensitivity row is reference (90, 95):
    // take the first bold segment's row coordinate and read the label there
    const std::size_t bold = svg.find("stroke-width=\"2.6\"");
    REQUIRE(bold != std::string::npos);
    const std::size_t line_start = svg.rfind("<line", bold);
    const std::size_t y1 = svg.find("y1=\"", line_start) + 4;
    const double cy = std::stod(svg.substr(y1, svg.find('"', y1) - y1));
    char label_probe[64];
    std::snprintf(label_probe, sizeof label_probe, "y=\"%g\" class=\"row\">Se 90 / Sp 95<",
                  cy + 3.0);
    CHECK(svg.find(label_probe) != std::string::npos);

    // bounds-only input renders too
    const std::string plain = emit_forest(fixed_model_records());
    check_svg(plain);

    CHECK_THROWS(emit_forest({}));
}
