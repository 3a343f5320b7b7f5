#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace refnoise {

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt6(*v) : "NA"; }

std::string pct1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
    return buf;
}

// Percent without trailing zeros, for titles and labels (30, 12.5, ...).
std::string pct_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", 100.0 * v);
    return buf;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

struct RecordView {
    std::optional<double> point_sens, point_spec;
    std::optional<double> best_sens, worst_sens, range_sens;
    std::optional<double> best_spec, worst_spec, range_spec;
    std::optional<double> mc_min_sens, mc_max_sens, mc_mean_sens;
    std::optional<double> mc_min_spec, mc_max_spec, mc_mean_spec;
    std::optional<std::int64_t> mc_trials;
};

std::optional<double> metric_value(const std::optional<Fraction>& f) {
    if (!f) return std::nullopt;
    return f->value();
}

std::optional<double> summary_field(const std::optional<McSummary>& mc, bool sens,
                                    double MetricSummary::* field) {
    if (!mc) return std::nullopt;
    const MetricSummary& s = sens ? mc->sensitivity : mc->specificity;
    if (!s.defined()) return std::nullopt;
    return s.*field;
}

RecordView view_of(const SweepRecord& r) {
    RecordView v;
    v.point_sens = metric_value(r.point.sensitivity);
    v.point_spec = metric_value(r.point.specificity);
    if (r.sens_bounds) {
        v.best_sens = r.sens_bounds->best().value();
        v.worst_sens = r.sens_bounds->worst().value();
        v.range_sens = r.sens_bounds->range().value();
    }
    if (r.spec_bounds) {
        v.best_spec = r.spec_bounds->best().value();
        v.worst_spec = r.spec_bounds->worst().value();
        v.range_spec = r.spec_bounds->range().value();
    }
    v.mc_min_sens = summary_field(r.mc, true, &MetricSummary::min);
    v.mc_max_sens = summary_field(r.mc, true, &MetricSummary::max);
    v.mc_mean_sens = summary_field(r.mc, true, &MetricSummary::mean);
    v.mc_min_spec = summary_field(r.mc, false, &MetricSummary::min);
    v.mc_max_spec = summary_field(r.mc, false, &MetricSummary::max);
    v.mc_mean_spec = summary_field(r.mc, false, &MetricSummary::mean);
    if (r.mc) v.mc_trials = r.mc->n_trials;
    return v;
}

constexpr const char* kCsvHeader =
    "n_total,prevalence,model_se,model_sp,ref_se,ref_sp,point_sens,point_spec,"
    "best_sens,worst_sens,range_sens,best_spec,worst_spec,range_spec,"
    "mc_min_sens,mc_max_sens,mc_mean_sens,mc_min_spec,mc_max_spec,mc_mean_spec,"
    "mc_trials,seed";

std::string emit_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const SweepRecord& r : records) {
        const RecordView v = view_of(r);
        out << r.n_total << ',' << fmt6(r.prevalence) << ',' << fmt6(r.model.sensitivity.value())
            << ',' << fmt6(r.model.specificity.value()) << ','
            << fmt6(r.reference.sensitivity.value()) << ','
            << fmt6(r.reference.specificity.value()) << ',' << fmt_opt(v.point_sens) << ','
            << fmt_opt(v.point_spec) << ',' << fmt_opt(v.best_sens) << ','
            << fmt_opt(v.worst_sens) << ',' << fmt_opt(v.range_sens) << ','
            << fmt_opt(v.best_spec) << ',' << fmt_opt(v.worst_spec) << ','
            << fmt_opt(v.range_spec) << ',' << fmt_opt(v.mc_min_sens) << ','
            << fmt_opt(v.mc_max_sens) << ',' << fmt_opt(v.mc_mean_sens) << ','
            << fmt_opt(v.mc_min_spec) << ',' << fmt_opt(v.mc_max_spec) << ','
            << fmt_opt(v.mc_mean_spec) << ',';
        if (v.mc_trials) {
            out << *v.mc_trials;
        } else {
            out << "NA";
        }
        out << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string emit_jsonl(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    for (const SweepRecord& r : records) {
        const RecordView v = view_of(r);
        nlohmann::ordered_json row;
        row["n_total"] = r.n_total;
        row["prevalence"] = round6(r.prevalence);
        row["model_se"] = round6(r.model.sensitivity.value());
        row["model_sp"] = round6(r.model.specificity.value());
        row["ref_se"] = round6(r.reference.sensitivity.value());
        row["ref_sp"] = round6(r.reference.specificity.value());
        auto put = [&row](const char* key, const std::optional<double>& val) {
            if (val) {
                row[key] = round6(*val);
            } else {
                row[key] = nullptr;
            }
        };
        put("point_sens", v.point_sens);
        put("point_spec", v.point_spec);
        put("best_sens", v.best_sens);
        put("worst_sens", v.worst_sens);
        put("range_sens", v.range_sens);
        put("best_spec", v.best_spec);
        put("worst_spec", v.worst_spec);
        put("range_spec", v.range_spec);
        put("mc_min_sens", v.mc_min_sens);
        put("mc_max_sens", v.mc_max_sens);
        put("mc_mean_sens", v.mc_mean_sens);
        put("mc_min_spec", v.mc_min_spec);
        put("mc_max_spec", v.mc_max_spec);
        put("mc_mean_spec", v.mc_mean_spec);
        if (v.mc_trials) {
            row["mc_trials"] = *v.mc_trials;
        } else {
            row["mc_trials"] = nullptr;
        }
        row["seed"] = r.seed;
        out << row.dump() << '\n';
    }
    return out.str();
}

}  // namespace

std::string emit_table(const std::vector<SweepRecord>& records, TableFormat format) {
    if (records.empty()) throw std::invalid_argument("records: empty list");
    return format == TableFormat::Csv ? emit_csv(records) : emit_jsonl(records);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::optional<double> parse_opt(const std::string& s, int line_no) {
    if (s == "NA") return std::nullopt;
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number '" + s +
                                    "'");
    }
    return v;
}

double parse_num(const std::string& s, int line_no) {
    const auto v = parse_opt(s, line_no);
    if (!v) throw std::invalid_argument("csv line " + std::to_string(line_no) + ": unexpected NA");
    return *v;
}

}  // namespace

std::vector<TableRow> parse_table_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("csv: missing or mismatched header row");
    }
    std::vector<TableRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 22) {
            throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected 22 fields, got " +
                                        std::to_string(f.size()));
        }
        TableRow r;
        r.n_total = static_cast<std::int64_t>(parse_num(f[0], line_no));
        r.prevalence = parse_num(f[1], line_no);
        r.model_se = parse_num(f[2], line_no);
        r.model_sp = parse_num(f[3], line_no);
        r.ref_se = parse_num(f[4], line_no);
        r.ref_sp = parse_num(f[5], line_no);
        r.point_sens = parse_opt(f[6], line_no);
        r.point_spec = parse_opt(f[7], line_no);
        r.best_sens = parse_opt(f[8], line_no);
        r.worst_sens = parse_opt(f[9], line_no);
        r.range_sens = parse_opt(f[10], line_no);
        r.best_spec = parse_opt(f[11], line_no);
        r.worst_spec = parse_opt(f[12], line_no);
        r.range_spec = parse_opt(f[13], line_no);
        r.mc_min_sens = parse_opt(f[14], line_no);
        r.mc_max_sens = parse_opt(f[15], line_no);
        r.mc_mean_sens = parse_opt(f[16], line_no);
        r.mc_min_spec = parse_opt(f[17], line_no);
        r.mc_max_spec = parse_opt(f[18], line_no);
        r.mc_mean_spec = parse_opt(f[19], line_no);
        if (const auto t = parse_opt(f[20], line_no)) r.mc_trials = static_cast<std::int64_t>(*t);
        r.seed = static_cast<std::uint64_t>(parse_num(f[21], line_no));
        rows.push_back(r);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// SVG output. Plain markup, no plotting dependency; every document is
// self-contained (inline styles only).

namespace {

constexpr double kScaleLo = 0.5;  // color scale anchor; values below clamp

struct Rgb {
    int r, g, b;
};

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + t * (y - x))); };
    return Rgb{mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// Red -> yellow -> green over the anchored scale.
Rgb scale_color(double v) {
    static constexpr Rgb low{215, 48, 39}, mid{254, 224, 139}, high{26, 152, 80};
    const double t = std::clamp((v - kScaleLo) / (1.0 - kScaleLo), 0.0, 1.0);
    return t < 0.5 ? lerp(low, mid, 2.0 * t) : lerp(mid, high, 2.0 * t - 1.0);
}

std::string hex(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

// Dark text on light cells, light text on saturated ones.
std::string text_color(const Rgb& c) {
    const double luma = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
    return luma > 140.0 ? "#1f1f1f" : "#ffffff";
}

std::int64_t micro_key(double v) { return static_cast<std::int64_t>(std::llround(v * 1e6)); }

struct GridIndex {
    std::vector<double> se_values;          // descending (top row = highest sensitivity)
    std::vector<double> sp_values;          // ascending
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> cell;  // (se,sp) -> record
};

// Validates the one-prevalence/one-model precondition and rectangular
// completeness; throws with the offending cells listed.
GridIndex index_grid(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw std::invalid_argument("records: empty list");
    const double prev = records.front().prevalence;
    const double mse = records.front().model.sensitivity.value();
    const double msp = records.front().model.specificity.value();

    GridIndex g;
    std::set<std::int64_t> se_set, sp_set;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const SweepRecord& r = records[i];
        if (micro_key(r.prevalence) != micro_key(prev) ||
            micro_key(r.model.sensitivity.value()) != micro_key(mse) ||
            micro_key(r.model.specificity.value()) != micro_key(msp)) {
            throw std::invalid_argument(
                "records: plot input must hold a single prevalence and model point");
        }
        const auto key = std::make_pair(micro_key(r.reference.sensitivity.value()),
                                        micro_key(r.reference.specificity.value()));
        if (!g.cell.emplace(key, i).second) {
            throw std::invalid_argument("records: duplicate grid cell at ref_se=" +
                                        fmt6(r.reference.sensitivity.value()) + " ref_sp=" +
                                        fmt6(r.reference.specificity.value()));
        }
        se_set.insert(key.first);
        sp_set.insert(key.second);
    }

    std::string missing;
    for (std::int64_t se : se_set) {
        for (std::int64_t sp : sp_set) {
            if (!g.cell.count({se, sp})) {
                missing += " (ref_se=" + fmt6(se / 1e6) + ", ref_sp=" + fmt6(sp / 1e6) + ")";
            }
        }
    }
    if (!missing.empty()) {
        throw std::invalid_argument("records: incomplete grid, missing cells:" + missing);
    }

    for (auto it = se_set.rbegin(); it != se_set.rend(); ++it) {
        g.se_values.push_back(static_cast<double>(*it) / 1e6);
    }
    for (std::int64_t sp : sp_set) g.sp_values.push_back(static_cast<double>(sp) / 1e6);
    return g;
}

std::string svg_text(double x, double y, const std::string& cls, const std::string& body,
                     const std::string& extra = "") {
    std::ostringstream s;
    s << "<text x=\"" << x << "\" y=\"" << y << "\" class=\"" << cls << "\"" << extra << ">"
      << body << "</text>\n";
    return s.str();
}

}  // namespace

std::string emit_heatmap(const std::vector<SweepRecord>& records, Metric metric) {
    const GridIndex grid = index_grid(records);
    const SweepRecord& first = records.front();
    const bool sens = metric == Metric::Sensitivity;

    constexpr double cell_w = 52, cell_h = 32;
    constexpr double left = 96, top = 78, right = 150, bottom = 72;
    const double plot_w = cell_w * static_cast<double>(grid.sp_values.size());
    const double plot_h = cell_h * static_cast<double>(grid.se_values.size());
    const double width = left + plot_w + right;
    const double height = top + plot_h + bottom;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<style>\n"
        << "text { font-family: Helvetica, Arial, sans-serif; }\n"
        << ".title { font-size: 15px; font-weight: bold; }\n"
        << ".subtitle { font-size: 12px; fill: #444444; }\n"
        << ".tick { font-size: 11px; text-anchor: middle; }\n"
        << ".ytick { font-size: 11px; text-anchor: end; }\n"
        << ".axis { font-size: 12px; text-anchor: middle; }\n"
        << ".cell { font-size: 11px; text-anchor: middle; }\n"
        << ".note { font-size: 10px; fill: #666666; }\n"
        << "</style>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";

    svg << svg_text(left, 24, "title",
                    std::string("Observed ") + (sens ? "sensitivity" : "specificity") +
                        " under an imperfect reference");
    svg << svg_text(left, 44, "subtitle",
                    "prevalence " + pct_label(first.prevalence) + "%, model Se " +
                        pct_label(first.model.sensitivity.value()) + "% / Sp " +
                        pct_label(first.model.specificity.value()) +
                        "%, independence point estimate (%)");

    bool any_below_scale = false;
    for (std::size_t row = 0; row < grid.se_values.size(); ++row) {
        const double se = grid.se_values[row];
        const double y = top + cell_h * static_cast<double>(row);
        svg << svg_text(left - 8, y + cell_h / 2 + 4, "ytick", pct_label(se));
        for (std::size_t col = 0; col < grid.sp_values.size(); ++col) {
            const double sp = grid.sp_values[col];
            const double x = left + cell_w * static_cast<double>(col);
            const SweepRecord& r = records[grid.cell.at({micro_key(se), micro_key(sp)})];
            const std::optional<Fraction> value = sens ? r.point.sensitivity : r.point.specificity;

            std::string fill = "#d9d9d9", label = "NA", color = "#1f1f1f";
            if (value) {
                const double v = value->value();
                const Rgb c = scale_color(v);
                fill = hex(c);
                color = text_color(c);
                label = pct1(v);
                if (v < kScaleLo) {
                    label += "*";
                    any_below_scale = true;
                }
            }
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"" << fill
                << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
            svg << svg_text(x + cell_w / 2, y + cell_h / 2 + 4, "cell", label,
                            " fill=\"" + color + "\"");
        }
    }

    for (std::size_t col = 0; col < grid.sp_values.size(); ++col) {
        const double x = left + cell_w * (static_cast<double>(col) + 0.5);
        svg << svg_text(x, top + plot_h + 18, "tick", pct_label(grid.sp_values[col]));
    }
    svg << svg_text(left + plot_w / 2, top + plot_h + 42, "axis", "reference specificity (%)");
    {
        const double yx = left - 62, yy = top + plot_h / 2;
        std::ostringstream rot;
        rot << " transform=\"rotate(-90 " << yx << " " << yy << ")\"";
        svg << svg_text(yx, yy, "axis", "reference sensitivity (%)", rot.str());
    }

    // color legend: vertical gradient over the anchored scale
    {
        const double lx = left + plot_w + 46, ly = top, lw = 16, lh = plot_h;
        svg << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
        for (int i = 0; i <= 10; ++i) {
            const double t = static_cast<double>(i) / 10.0;
            svg << "<stop offset=\"" << t * 100.0 << "%\" stop-color=\""
                << hex(scale_color(kScaleLo + t * (1.0 - kScaleLo))) << "\"/>\n";
        }
        svg << "</linearGradient></defs>\n";
        svg << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"" << lw << "\" height=\""
            << lh << "\" fill=\"url(#scale)\" stroke=\"#888888\"/>\n";
        for (double v : {0.5, 0.75, 1.0}) {
            const double ty = ly + lh * (1.0 - (v - kScaleLo) / (1.0 - kScaleLo));
            svg << "<line x1=\"" << lx + lw << "\" y1=\"" << ty << "\" x2=\"" << lx + lw + 4
                << "\" y2=\"" << ty << "\" stroke=\"#444444\"/>\n";
            svg << svg_text(lx + lw + 8, ty + 4, "note", pct_label(v),
                            " text-anchor=\"start\"");
        }
        svg << svg_text(lx - 4, ly - 10, "note", "observed (%)", " text-anchor=\"start\"");
    }

    if (any_below_scale) {
        svg << svg_text(left, top + plot_h + 60, "note", "* below the 50% scale anchor");
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string emit_forest(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw std::invalid_argument("records: empty list");
    const double prev = records.front().prevalence;
    const double mse = records.front().model.sensitivity.value();
    const double msp = records.front().model.specificity.value();
    for (const SweepRecord& r : records) {
        if (micro_key(r.prevalence) != micro_key(prev) ||
            micro_key(r.model.sensitivity.value()) != micro_key(mse) ||
            micro_key(r.model.specificity.value()) != micro_key(msp)) {
            throw std::invalid_argument(
                "records: plot input must hold a single prevalence and model point");
        }
    }

    std::vector<const SweepRecord*> rows;
    rows.reserve(records.size());
    for (const SweepRecord& r : records) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](const SweepRecord* a, const SweepRecord* b) {
        const auto ka = std::make_pair(micro_key(a->reference.sensitivity.value()),
                                       micro_key(a->reference.specificity.value()));
        const auto kb = std::make_pair(micro_key(b->reference.sensitivity.value()),
                                       micro_key(b->reference.specificity.value()));
        return ka > kb;  // best reference first
    });

    struct Panel {
        bool sens;
        const char* title;
        double truth;
        const char* mc_fill;
        double max_range = 0.0;
        double x_min = 1.0;
    };
    Panel panels[2] = {{true, "observed sensitivity", mse, "#d62728"},
                       {false, "observed specificity", msp, "#2ca02c"}};

    for (Panel& p : panels) {
        for (const SweepRecord* r : rows) {
            const auto& b = p.sens ? r->sens_bounds : r->spec_bounds;
            if (b) {
                p.max_range = std::max(p.max_range, b->range().value());
                p.x_min = std::min(p.x_min, b->worst().value());
            }
            if (r->mc) {
                const MetricSummary& s = p.sens ? r->mc->sensitivity : r->mc->specificity;
                if (s.defined()) p.x_min = std::min(p.x_min, s.min);
            }
        }
        p.x_min = std::min(p.x_min, p.truth);
        p.x_min = std::max(0.0, std::floor(p.x_min * 20.0) / 20.0 - 0.05);
    }

    constexpr double row_h = 13, label_w = 118, panel_w = 330, panel_gap = 56;
    constexpr double top = 84, bottom = 46;
    const double n_rows = static_cast<double>(rows.size());
    const double width = label_w + 2 * panel_w + panel_gap + 40;
    const double height = top + row_h * n_rows + bottom;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<style>\n"
        << "text { font-family: Helvetica, Arial, sans-serif; }\n"
        << ".title { font-size: 15px; font-weight: bold; }\n"
        << ".subtitle { font-size: 12px; fill: #444444; }\n"
        << ".row { font-size: 9px; text-anchor: end; fill: #333333; }\n"
        << ".tick { font-size: 10px; text-anchor: middle; fill: #333333; }\n"
        << ".ptitle { font-size: 12px; text-anchor: middle; font-weight: bold; }\n"
        << ".note { font-size: 10px; fill: #666666; }\n"
        << "</style>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";

    svg << svg_text(16, 24, "title", "Observed-performance intervals by reference operating point");
    svg << svg_text(16, 44, "subtitle",
                    "prevalence " + pct_label(prev) + "%, model Se " + pct_label(mse) + "% / Sp " +
                        pct_label(msp) + "%; segment = attainable [worst, best], bar = Monte Carlo"
                        " [min, max], dashed rule = true value");

    for (int pi = 0; pi < 2; ++pi) {
        const Panel& p = panels[pi];
        const double px = label_w + pi * (panel_w + panel_gap);
        auto sx = [&](double v) {
            return px + (v - p.x_min) / (1.0 - p.x_min) * panel_w;
        };
        svg << svg_text(px + panel_w / 2, top - 16, "ptitle", p.title);

        // frame and percent ticks
        svg << "<rect x=\"" << px << "\" y=\"" << top - 4 << "\" width=\"" << panel_w
            << "\" height=\"" << row_h * n_rows + 8
            << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        const double tick_step = (1.0 - p.x_min) > 0.25 ? 0.1 : 0.05;
        const int n_ticks = static_cast<int>(std::floor((1.0 - p.x_min) / tick_step + 1e-9));
        for (int ti = 0; ti <= n_ticks; ++ti) {
            const double t = 1.0 - tick_step * (n_ticks - ti);  // ticks land exactly on 100%
            svg << "<line x1=\"" << sx(t) << "\" y1=\"" << top + row_h * n_rows + 4 << "\" x2=\""
                << sx(t) << "\" y2=\"" << top + row_h * n_rows + 9
                << "\" stroke=\"#666666\"/>\n";
            svg << svg_text(sx(t), top + row_h * n_rows + 22, "tick", pct_label(t));
        }

        // dashed rule at the model's true metric
        svg << "<line x1=\"" << sx(p.truth) << "\" y1=\"" << top - 4 << "\" x2=\"" << sx(p.truth)
            << "\" y2=\"" << top + row_h * n_rows + 4
            << "\" stroke=\"#1f77b4\" stroke-dasharray=\"5 3\" stroke-width=\"1.2\"/>\n";

        for (std::size_t i = 0; i < rows.size(); ++i) {
            const SweepRecord& r = *rows[i];
            const double cy = top + row_h * (static_cast<double>(i) + 0.5);
            if (pi == 0) {
                svg << svg_text(label_w - 10, cy + 3, "row",
                                "Se " + pct_label(r.reference.sensitivity.value()) + " / Sp " +
                                    pct_label(r.reference.specificity.value()));
            }
            const auto& b = p.sens ? r.sens_bounds : r.spec_bounds;
            if (!b) {
                svg << svg_text(px + 6, cy + 3, "note", "NA", " text-anchor=\"start\"");
                continue;
            }
            const bool widest = b->range().value() >= p.max_range - 1e-12 && p.max_range > 0.0;
            if (r.mc) {
                const MetricSummary& s = p.sens ? r.mc->sensitivity : r.mc->specificity;
                if (s.defined()) {
                    svg << "<rect x=\"" << sx(s.min) << "\" y=\"" << cy - 3.0 << "\" width=\""
                        << std::max(0.75, sx(s.max) - sx(s.min)) << "\" height=\"6\" fill=\""
                        << p.mc_fill << "\" fill-opacity=\"0.55\"/>\n";
                }
            }
            const double x1 = sx(b->worst().value()), x2 = sx(b->best().value());
            const char* stroke = widest ? "#000000" : "#555555";
            const double sw = widest ? 2.6 : 1.2;
            svg << "<line x1=\"" << x1 << "\" y1=\"" << cy << "\" x2=\"" << std::max(x2, x1 + 0.5)
                << "\" y2=\"" << cy << "\" stroke=\"" << stroke << "\" stroke-width=\"" << sw
                << "\"/>\n";
            for (double xe : {x1, x2}) {
                svg << "<line x1=\"" << xe << "\" y1=\"" << cy - 2.6 << "\" x2=\"" << xe
                    << "\" y2=\"" << cy + 2.6 << "\" stroke=\"" << stroke << "\" stroke-width=\""
                    << sw << "\"/>\n";
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace refnoise
