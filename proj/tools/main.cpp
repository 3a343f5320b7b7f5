// refnoise command line. Front end only: all computation goes through
// the C API in refnoise.h. Exit codes: 0 success, 1 usage/validation
// error, 2 verification failure.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "refnoise.h"

namespace {

constexpr size_t kErrLen = 512;

std::string fmt_metric(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string pct_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", 100.0 * v);
    return buf;
}

int threads_from_env() {
    const char* raw = std::getenv("REFNOISE_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    const long v = std::strtol(raw, nullptr, 10);
    return v > 0 ? static_cast<int>(v) : 0;
}

[[noreturn]] void die(const std::string& what) {
    std::cerr << "error: " << what << "\n";
    std::exit(1);
}

void require_ok(rn_status status, const char* err) {
    if (status != RN_OK) die(err);
}

// --- bounds -----------------------------------------------------------

struct BoundsArgs {
    std::int64_t n = 10000;
    double prevalence = 0.0, model_se = 0.0, model_sp = 0.0, ref_se = 0.0, ref_sp = 0.0;
};

int run_bounds(const BoundsArgs& a) {
    rn_bounds b;
    char err[kErrLen] = {0};
    require_ok(rn_compute_bounds(a.n, a.prevalence, a.model_se, a.model_sp, a.ref_se, a.ref_sp,
                                 &b, err, kErrLen),
               err);
    std::printf("n_total     %lld\n", static_cast<long long>(a.n));
    std::printf("prevalence  %s%%\n", pct_label(a.prevalence > 1 ? a.prevalence / 100 : a.prevalence).c_str());
    std::printf("model       Se %s%% / Sp %s%%\n",
                pct_label(a.model_se > 1 ? a.model_se / 100 : a.model_se).c_str(),
                pct_label(a.model_sp > 1 ? a.model_sp / 100 : a.model_sp).c_str());
    std::printf("reference   Se %s%% / Sp %s%%\n\n",
                pct_label(a.ref_se > 1 ? a.ref_se / 100 : a.ref_se).c_str(),
                pct_label(a.ref_sp > 1 ? a.ref_sp / 100 : a.ref_sp).c_str());
    std::printf("metric        point     best      worst     range\n");
    std::printf("sensitivity   %-9s %-9s %-9s %-9s\n", fmt_metric(b.point_sens).c_str(),
                fmt_metric(b.best_sens).c_str(), fmt_metric(b.worst_sens).c_str(),
                fmt_metric(b.range_sens).c_str());
    std::printf("specificity   %-9s %-9s %-9s %-9s\n", fmt_metric(b.point_spec).c_str(),
                fmt_metric(b.best_spec).c_str(), fmt_metric(b.worst_spec).c_str(),
                fmt_metric(b.range_spec).c_str());
    return 0;
}

// --- oracle -----------------------------------------------------------

int run_oracle(const BoundsArgs& a) {
    rn_oracle_result o;
    char err[kErrLen] = {0};
    const rn_status st = rn_run_oracle(a.n, a.prevalence, a.model_se, a.model_sp, a.ref_se,
                                       a.ref_sp, &o, err, kErrLen);
    if (st == RN_ERR_TOO_LARGE) {
        die(std::string(err) + " (use the bounds command for large cohorts)");
    }
    require_ok(st, err);
    std::printf("tables enumerated  %lld\n", static_cast<long long>(o.tables_enumerated));
    std::printf("sensitivity        min %s  max %s\n", fmt_metric(o.sens_min).c_str(),
                fmt_metric(o.sens_max).c_str());
    std::printf("specificity        min %s  max %s\n", fmt_metric(o.spec_min).c_str(),
                fmt_metric(o.spec_max).c_str());
    std::printf("closed-form match  %s\n", o.matches_closed_form ? "yes" : "NO");
    return 0;
}

// --- sweep ------------------------------------------------------------

struct SweepArgs {
    std::string config;
    std::string out_dir;
    std::string format = "csv";
    bool plots = false;
    std::vector<double> prevalences;
    std::vector<std::string> models;  // "SE,SP" or "SE/SP"
    std::int64_t n = -1;
    std::int64_t trials = -1;
    std::int64_t seed = -1;
    int mc = -1;  // -1 unset, 0 off, 1 on
    double ref_lo = -1, ref_hi = -1, ref_step = -1;
};

struct SweepHandle {
    rn_sweep* ptr = rn_sweep_new();
    ~SweepHandle() { rn_sweep_free(ptr); }
};

struct RecordsHandle {
    rn_records* ptr = nullptr;
    ~RecordsHandle() { rn_records_free(ptr); }
};

std::pair<double, double> parse_point(const std::string& text) {
    const auto sep = text.find_first_of(",/x");
    if (sep == std::string::npos) {
        die("model '" + text + "': expected SE,SP");
    }
    try {
        return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + 1))};
    } catch (const std::exception&) {
        die("model '" + text + "': expected two numbers");
    }
}

int run_sweep(const SweepArgs& a) {
    char err[kErrLen] = {0};
    SweepHandle sweep;
    if (sweep.ptr == nullptr) die("out of memory");

    if (!a.config.empty()) {
        require_ok(rn_sweep_load_config(sweep.ptr, a.config.c_str(), err, kErrLen), err);
    }
    for (double p : a.prevalences) {
        require_ok(rn_sweep_add_prevalence(sweep.ptr, p, err, kErrLen), err);
    }
    for (const std::string& m : a.models) {
        const auto [se, sp] = parse_point(m);
        require_ok(rn_sweep_add_model(sweep.ptr, se, sp, err, kErrLen), err);
    }
    if (a.n > 0) require_ok(rn_sweep_set_n_total(sweep.ptr, a.n, err, kErrLen), err);
    if (a.trials > 0) require_ok(rn_sweep_set_trials(sweep.ptr, a.trials, err, kErrLen), err);
    if (a.seed >= 0) {
        require_ok(rn_sweep_set_seed(sweep.ptr, static_cast<uint64_t>(a.seed), err, kErrLen), err);
    }
    if (a.mc >= 0) require_ok(rn_sweep_set_monte_carlo(sweep.ptr, a.mc, err, kErrLen), err);
    if (a.ref_lo >= 0 || a.ref_hi >= 0 || a.ref_step >= 0) {
        if (a.ref_lo < 0 || a.ref_hi < 0 || a.ref_step < 0) {
            die("--ref-lo, --ref-hi and --ref-step must be given together");
        }
        require_ok(rn_sweep_set_grid(sweep.ptr, a.ref_lo, a.ref_hi, a.ref_step, err, kErrLen), err);
    }

    std::error_code ec;
    std::filesystem::create_directories(a.out_dir, ec);
    if (ec) die("cannot create output directory '" + a.out_dir + "': " + ec.message());

    RecordsHandle records;
    require_ok(rn_sweep_run(sweep.ptr, threads_from_env(), &records.ptr, err, kErrLen), err);
    const std::int64_t count = rn_records_count(records.ptr);

    const bool csv = a.format == "csv";
    if (!csv && a.format != "jsonl") die("--format must be csv or jsonl");
    const std::string table_path = a.out_dir + "/records." + (csv ? "csv" : "jsonl");
    require_ok(rn_records_write_table(records.ptr, table_path.c_str(),
                                      csv ? RN_FORMAT_CSV : RN_FORMAT_JSONL, err, kErrLen),
               err);

    int plot_count = 0;
    if (a.plots) {
        // distinct (prevalence, model) panes, in record order
        std::vector<std::array<double, 3>> panes;
        for (std::int64_t i = 0; i < count; ++i) {
            rn_record rec;
            require_ok(rn_records_get(records.ptr, i, &rec, err, kErrLen), err);
            const std::array<double, 3> key{rec.prevalence, rec.model_se, rec.model_sp};
            bool seen = false;
            for (const auto& k : panes) {
                if (std::abs(k[0] - key[0]) < 1e-9 && std::abs(k[1] - key[1]) < 1e-9 &&
                    std::abs(k[2] - key[2]) < 1e-9) {
                    seen = true;
                    break;
                }
            }
            if (!seen) panes.push_back(key);
        }
        for (const auto& pane : panes) {
            RecordsHandle subset;
            require_ok(rn_records_filter(records.ptr, pane[0], pane[1], pane[2], &subset.ptr, err,
                                         kErrLen),
                       err);
            const std::string stem = a.out_dir + "/p" + pct_label(pane[0]) + "_m" +
                                     pct_label(pane[1]) + "x" + pct_label(pane[2]);
            require_ok(rn_records_write_heatmap(subset.ptr, (stem + "_sensitivity.svg").c_str(),
                                                RN_METRIC_SENSITIVITY, err, kErrLen),
                       err);
            require_ok(rn_records_write_heatmap(subset.ptr, (stem + "_specificity.svg").c_str(),
                                                RN_METRIC_SPECIFICITY, err, kErrLen),
                       err);
            require_ok(rn_records_write_forest(subset.ptr, (stem + "_forest.svg").c_str(), err,
                                               kErrLen),
                       err);
            plot_count += 3;
        }
    }

    rn_extremes ex;
    require_ok(rn_records_extremes(records.ptr, &ex, err, kErrLen), err);
    std::printf("wrote %lld records to %s", static_cast<long long>(count), table_path.c_str());
    if (plot_count > 0) std::printf(" and %d plots", plot_count);
    std::printf("\n");
    if (ex.sensitivity.defined) {
        std::printf("sensitivity range: min %s  max %s at prevalence %s%% reference Se %s%% / Sp %s%%\n",
                    fmt_metric(ex.sensitivity.min_range).c_str(),
                    fmt_metric(ex.sensitivity.max_range).c_str(),
                    pct_label(ex.sensitivity.argmax_prevalence).c_str(),
                    pct_label(ex.sensitivity.argmax_ref_se).c_str(),
                    pct_label(ex.sensitivity.argmax_ref_sp).c_str());
    }
    if (ex.specificity.defined) {
        std::printf("specificity range: min %s  max %s at prevalence %s%% reference Se %s%% / Sp %s%%\n",
                    fmt_metric(ex.specificity.min_range).c_str(),
                    fmt_metric(ex.specificity.max_range).c_str(),
                    pct_label(ex.specificity.argmax_prevalence).c_str(),
                    pct_label(ex.specificity.argmax_ref_se).c_str(),
                    pct_label(ex.specificity.argmax_ref_sp).c_str());
    }
    return 0;
}

// --- reproduce ----------------------------------------------------------

int run_reproduce() {
    char err[kErrLen] = {0};
    char* text = nullptr;
    int n_checks = 0, n_failed = 0;
    require_ok(rn_run_verification(&text, &n_checks, &n_failed, err, kErrLen), err);
    std::fputs(text, stdout);
    rn_string_free(text);
    return n_failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"refnoise: how label noise in an imperfect reference standard distorts "
                 "observed diagnostic model performance"};
    app.set_version_flag("--version", rn_version());
    app.require_subcommand(1);

    BoundsArgs bounds_args;
    CLI::App* bounds = app.add_subcommand(
        "bounds", "Point estimate and best/worst-case observed metrics for one configuration");
    bounds->add_option("--n", bounds_args.n, "Cohort size")->capture_default_str();
    bounds->add_option("--prevalence", bounds_args.prevalence, "Ground-truth prevalence")
        ->required();
    bounds->add_option("--model-se", bounds_args.model_se, "Model sensitivity")->required();
    bounds->add_option("--model-sp", bounds_args.model_sp, "Model specificity")->required();
    bounds->add_option("--ref-se", bounds_args.ref_se, "Reference sensitivity")->required();
    bounds->add_option("--ref-sp", bounds_args.ref_sp, "Reference specificity")->required();

    BoundsArgs oracle_args;
    oracle_args.n = 100;
    CLI::App* oracle = app.add_subcommand(
        "oracle", "Exact per-metric extrema by exhaustive enumeration (small integer cohorts)");
    oracle->add_option("--n", oracle_args.n, "Cohort size (at most 100)")->capture_default_str();
    oracle->add_option("--prevalence", oracle_args.prevalence, "Ground-truth prevalence")
        ->required();
    oracle->add_option("--model-se", oracle_args.model_se, "Model sensitivity")->required();
    oracle->add_option("--model-sp", oracle_args.model_sp, "Model specificity")->required();
    oracle->add_option("--ref-se", oracle_args.ref_se, "Reference sensitivity")->required();
    oracle->add_option("--ref-sp", oracle_args.ref_sp, "Reference specificity")->required();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run a parameter sweep and write tables (and optionally plots)");
    sweep->add_option("--config", sweep_args.config, "Flat key/value sweep configuration file");
    sweep->add_option("--out", sweep_args.out_dir, "Output directory")->required();
    sweep->add_option("--format", sweep_args.format, "Table format: csv or jsonl")
        ->capture_default_str();
    sweep->add_flag("--plots", sweep_args.plots, "Emit heatmap and forest SVGs per pane");
    sweep->add_option("--prevalence", sweep_args.prevalences, "Prevalence (repeatable)");
    sweep->add_option("--model", sweep_args.models, "Model operating point SE,SP (repeatable)");
    sweep->add_option("--n", sweep_args.n, "Cohort size");
    sweep->add_option("--trials", sweep_args.trials, "Monte Carlo trials per cell");
    sweep->add_option("--seed", sweep_args.seed, "Master seed");
    bool mc_on = false, mc_off = false;
    sweep->add_flag("--mc", mc_on, "Include Monte Carlo columns");
    sweep->add_flag("--no-mc", mc_off, "Force Monte Carlo off")->excludes("--mc");
    sweep->add_option("--ref-lo", sweep_args.ref_lo, "Reference grid low end");
    sweep->add_option("--ref-hi", sweep_args.ref_hi, "Reference grid high end");
    sweep->add_option("--ref-step", sweep_args.ref_step, "Reference grid step");

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "Run the built-in verification battery and report pass/fail per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {  // --help / --version
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (mc_on) sweep_args.mc = 1;
    if (mc_off) sweep_args.mc = 0;

    try {
        if (bounds->parsed()) return run_bounds(bounds_args);
        if (oracle->parsed()) return run_oracle(oracle_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
        if (reproduce->parsed()) return run_reproduce();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
