#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace refnoise {

double normalize_rate(double raw) { return raw > 1.0 ? raw / 100.0 : raw; }

namespace {

[[noreturn]] void bad_line(int line_no, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, int line_no, const std::string& key) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        bad_line(line_no, key + ": not a number: '" + tok + "'");
    }
}

std::int64_t parse_int(const std::string& tok, int line_no, const std::string& key) {
    try {
        size_t used = 0;
        const long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        bad_line(line_no, key + ": not an integer: '" + tok + "'");
    }
}

}  // namespace

SweepSpec parse_sweep_config(const std::string& text) {
    SweepSpec spec;
    spec.prevalences.clear();
    spec.model_points.clear();
    // grid endpoints are collected raw so lo/hi/step share one
    // percent-or-fraction decision
    double ref_lo = 90, ref_hi = 100, ref_step = 1;
    bool grid_touched = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) bad_line(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) bad_line(line_no, "empty key");
        if (value.empty()) bad_line(line_no, key + ": empty value");

        std::vector<std::string> tokens;
        std::istringstream vs(value);
        for (std::string tok; vs >> tok;) tokens.push_back(tok);
        auto expect_arity = [&](std::size_t n) {
            if (tokens.size() != n) {
                bad_line(line_no, key + ": expected " + std::to_string(n) + " value(s), got " +
                                      std::to_string(tokens.size()));
            }
        };

        auto rate = [&](const std::string& tok, const char* field) {
            const double v = normalize_rate(parse_double(tok, line_no, key));
            try {
                return validate_fraction(v, field);
            } catch (const std::invalid_argument& e) {
                bad_line(line_no, e.what());
            }
        };

        if (key == "n_total") {
            expect_arity(1);
            spec.n_total = parse_int(tokens[0], line_no, key);
        } else if (key == "prevalence") {
            expect_arity(1);
            spec.prevalences.push_back(rate(tokens[0], "prevalence").value());
        } else if (key == "model") {
            expect_arity(2);
            spec.model_points.push_back(OperatingPoint{rate(tokens[0], "model sensitivity"),
                                                       rate(tokens[1], "model specificity")});
        } else if (key == "ref_lo") {
            expect_arity(1);
            ref_lo = parse_double(tokens[0], line_no, key);
            grid_touched = true;
        } else if (key == "ref_hi") {
            expect_arity(1);
            ref_hi = parse_double(tokens[0], line_no, key);
            grid_touched = true;
        } else if (key == "ref_step") {
            expect_arity(1);
            ref_step = parse_double(tokens[0], line_no, key);
            grid_touched = true;
        } else if (key == "trials") {
            expect_arity(1);
            spec.n_trials = parse_int(tokens[0], line_no, key);
        } else if (key == "seed") {
            expect_arity(1);
            spec.seed = static_cast<std::uint64_t>(parse_int(tokens[0], line_no, key));
        } else if (key == "mc") {
            expect_arity(1);
            const std::string& v = tokens[0];
            if (v == "on" || v == "true" || v == "1") {
                spec.include_mc = true;
            } else if (v == "off" || v == "false" || v == "0") {
                spec.include_mc = false;
            } else {
                bad_line(line_no, "mc: expected on/off, got '" + v + "'");
            }
        } else {
            bad_line(line_no, "unknown key '" + key + "'");
        }
    }

    if (grid_touched) {
        // one percent decision for the whole axis: endpoints above 1 pull
        // the step into percent units as well
        const bool percent = ref_lo > 1.0 || ref_hi > 1.0;
        spec.reference_grid.lo = percent ? ref_lo / 100.0 : ref_lo;
        spec.reference_grid.hi = percent ? ref_hi / 100.0 : ref_hi;
        spec.reference_grid.step = percent ? ref_step / 100.0 : normalize_rate(ref_step);
    }
    return spec;
}

SweepSpec load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_sweep_config(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

}  // namespace refnoise
