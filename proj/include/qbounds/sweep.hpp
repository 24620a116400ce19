// Copyright 2026 The qbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Parameter sweeps: strict JSON configuration, grid evaluation with
// record-and-continue failure policy, crossover detection, CSV emission
// and self-contained SVG rendering.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qbounds/detector.hpp"
#include "qbounds/errors.hpp"
#include "qbounds/holevo.hpp"

namespace qbounds {

struct SweepConfig {
    Scenario scenario = Scenario::Unbounded;
    std::vector<Param> params;          // parameters to estimate, ordered
    std::map<std::string, double> fixed;
    struct {
        std::string variable;  // theta | a_inv | tau
        double from = 0.0;
        double to = 0.0;
        int points = 0;
    } sweep;
    std::vector<std::string> bounds;  // subset of {sld,rld,upper,hcrb,nagaoka,analytic}
    std::string csv_path = "sweep.csv";
    std::optional<std::string> svg_path;
};

struct SweepRow {
    double sweep_value = 0.0;
    std::map<std::string, std::optional<double>> values;  // by column name
    bool hierarchy_ok = false;
    bool failed = false;  // per-point solver/model failure
};

namespace detail {

inline const std::set<std::string> kBoundNames = {"sld", "rld", "upper", "hcrb", "nagaoka", "analytic"};
inline const std::set<std::string> kFixedNames = {"theta", "phi", "a_inv", "tau", "z", "omega_eff"};
inline const std::set<std::string> kSweepVars = {"theta", "a_inv", "tau"};

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw SchemaError("unknown key at " + where + "/" + it.key());
}

inline Param param_from_name(const std::string& s) {
    if (s == "theta") return Param::Theta;
    if (s == "phi") return Param::Phi;
    if (s == "a_inv") return Param::AInv;
    throw SchemaError("unknown parameter name '" + s + "'");
}

}  // namespace detail

/// Strict-mode config parsing: unknown keys are rejected (SchemaError with
/// a JSON-pointer-style path), invariant violations raise RangeError.
inline SweepConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("top-level document must be an object");
    detail::reject_unknown_keys(j, {"scenario", "params", "fixed", "sweep", "bounds", "output"}, "");

    SweepConfig cfg;
    try {
        if (!j.contains("scenario")) throw SchemaError("missing key /scenario");
        const std::string scen = j.at("scenario").get<std::string>();
        if (scen == "unbounded")
            cfg.scenario = Scenario::Unbounded;
        else if (scen == "bounded")
            cfg.scenario = Scenario::Bounded;
        else
            throw SchemaError("/scenario must be 'unbounded' or 'bounded'");

        if (!j.contains("params")) throw SchemaError("missing key /params");
        for (const auto& s : j.at("params")) cfg.params.push_back(detail::param_from_name(s.get<std::string>()));
        if (cfg.params.empty()) throw RangeError("/params must be non-empty");

        if (j.contains("fixed")) {
            const auto& f = j.at("fixed");
            detail::reject_unknown_keys(f, detail::kFixedNames, "/fixed");
            for (auto it = f.begin(); it != f.end(); ++it) {
                if (!it.value().is_number()) throw SchemaError("/fixed/" + it.key() + " must be a number");
                cfg.fixed[it.key()] = it.value().get<double>();
            }
        }

        if (!j.contains("sweep")) throw SchemaError("missing key /sweep");
        const auto& sw = j.at("sweep");
        detail::reject_unknown_keys(sw, {"variable", "from", "to", "points"}, "/sweep");
        cfg.sweep.variable = sw.at("variable").get<std::string>();
        cfg.sweep.from = sw.at("from").get<double>();
        cfg.sweep.to = sw.at("to").get<double>();
        cfg.sweep.points = sw.at("points").get<int>();

        if (j.contains("bounds")) {
            for (const auto& s : j.at("bounds")) {
                const std::string name = s.get<std::string>();
                if (!detail::kBoundNames.count(name)) throw SchemaError("/bounds: unknown bound '" + name + "'");
                cfg.bounds.push_back(name);
            }
        } else {
            cfg.bounds = {"sld", "rld", "hcrb", "nagaoka"};
        }

        if (j.contains("output")) {
            const auto& out = j.at("output");
            detail::reject_unknown_keys(out, {"csv", "svg"}, "/output");
            if (out.contains("csv")) cfg.csv_path = out.at("csv").get<std::string>();
            if (out.contains("svg")) cfg.svg_path = out.at("svg").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("schema violation: ") + e.what());
    }

    // Invariants.
    if (!detail::kSweepVars.count(cfg.sweep.variable))
        throw RangeError("/sweep/variable must be one of theta, a_inv, tau");
    if (cfg.fixed.count(cfg.sweep.variable))
        throw RangeError("sweep variable '" + cfg.sweep.variable + "' also appears in /fixed");
    if (!(cfg.sweep.from < cfg.sweep.to)) throw RangeError("/sweep: from must be < to");
    if (cfg.sweep.points < 2) throw RangeError("/sweep/points must be >= 2");
    if (cfg.scenario == Scenario::Bounded && !cfg.fixed.count("z"))
        throw RangeError("bounded scenario requires fixed z");
    for (const std::string need : {"theta", "a_inv", "tau"})
        if (cfg.sweep.variable != need && !cfg.fixed.count(need))
            throw RangeError(std::string("'") + need + "' must be fixed or swept");
    return cfg;
}

/// Column names for a config, in emission order. "analytic" expands to the
/// two closed-form columns.
inline std::vector<std::string> sweep_columns(const SweepConfig& cfg) {
    std::vector<std::string> cols;
    for (const std::string& b : cfg.bounds) {
        if (b == "analytic") {
            cols.push_back("analytic_hcrb");
            cols.push_back("analytic_nb");
        } else {
            cols.push_back(b);
        }
    }
    return cols;
}

namespace detail {

inline DetectorParams point_at(const SweepConfig& cfg, double sweep_value) {
    auto get = [&](const std::string& name, double fallback) {
        if (cfg.sweep.variable == name) return sweep_value;
        auto it = cfg.fixed.find(name);
        return it == cfg.fixed.end() ? fallback : it->second;
    };
    return DetectorParams(get("theta", 0.0), get("phi", 0.0), get("a_inv", 0.0), get("tau", 0.0),
                          cfg.scenario, get("z", 0.0), get("omega_eff", 0.0));
}

inline SweepRow evaluate_point(const SweepConfig& cfg, double sweep_value) {
    SweepRow row;
    row.sweep_value = sweep_value;
    const std::vector<std::string> cols = sweep_columns(cfg);
    for (const std::string& c : cols) row.values[c] = std::nullopt;
    try {
        const DetectorParams p = point_at(cfg, sweep_value);
        const StatModel m = stat_model(p, cfg.params);
        const BoundReport rep = bound_report(m, {}, p);
        auto assign = [&](const std::string& name, const std::optional<double>& v) {
            if (row.values.count(name)) row.values[name] = v;
        };
        assign("sld", rep.c_sld);
        assign("rld", rep.c_rld);
        assign("upper", rep.c_upper);
        assign("hcrb", rep.c_hcrb);
        assign("nagaoka", rep.c_nagaoka);
        assign("analytic_hcrb", rep.analytic_hcrb);
        assign("analytic_nb", rep.analytic_nb);
        row.hierarchy_ok = rep.hierarchy_ok;
        if (!rep.c_hcrb) row.failed = true;
    } catch (const Error&) {
        row.failed = true;  // record-and-continue: absent columns
    }
    return row;
}

}  // namespace detail

/// Evaluate the sweep grid. Rows come back in ascending sweep order; grid
/// points where the model or a solver fails carry absent columns.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int jobs = 1) {
    const int n = cfg.sweep.points;
    std::vector<SweepRow> rows(n);
    auto value_at = [&](int i) {
        return cfg.sweep.from + (cfg.sweep.to - cfg.sweep.from) * i / (n - 1);
    };
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) rows[i] = detail::evaluate_point(cfg, value_at(i));
        return rows;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            rows[i] = detail::evaluate_point(cfg, value_at(i));
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return rows;
}

/// Sign-change abscissas of (col_a - col_b), linearly interpolated between
/// adjacent grid points.
inline std::vector<double> detect_crossover(const std::vector<SweepRow>& rows, const std::string& col_a,
                                            const std::string& col_b) {
    std::vector<double> crossings;
    int usable_pairs = 0;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto get = [&](size_t k, const std::string& c) -> std::optional<double> {
            auto it = rows[k].values.find(c);
            return it == rows[k].values.end() ? std::nullopt : it->second;
        };
        const auto a0 = get(i, col_a), b0 = get(i, col_b), a1 = get(i + 1, col_a), b1 = get(i + 1, col_b);
        if (!a0 || !b0 || !a1 || !b1) continue;
        ++usable_pairs;
        const double d0 = *a0 - *b0, d1 = *a1 - *b1;
        if (d0 == 0.0) {
            crossings.push_back(rows[i].sweep_value);
        } else if (d0 * d1 < 0.0) {
            const double t = d0 / (d0 - d1);
            crossings.push_back(rows[i].sweep_value + t * (rows[i + 1].sweep_value - rows[i].sweep_value));
        }
    }
    if (usable_pairs == 0) throw ColumnAbsent("columns '" + col_a + "'/'" + col_b +
                                              "' not simultaneously present on consecutive rows");
    return crossings;
}

namespace detail {

inline std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

inline void write_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& columns,
                      const std::string& path) {
    if (rows.empty()) throw InvalidInput("no rows to write");
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "sweep_var";
    for (const std::string& c : columns) out << "," << c;
    out << ",hierarchy_ok\n";
    for (const SweepRow& r : rows) {
        out << detail::format_sig12(r.sweep_value);
        for (const std::string& c : columns) {
            out << ",";
            const auto it = r.values.find(c);
            if (it != r.values.end() && it->second) out << detail::format_sig12(*it->second);
        }
        out << "," << (r.hierarchy_ok ? "true" : "false") << "\n";
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

/// Minimal self-contained SVG line chart: one polyline per column, linear
/// axes, legend labels equal to column names. No external resources.
inline void render_svg(const std::vector<SweepRow>& rows, const std::vector<std::string>& columns,
                       const std::string& path, const std::string& title = "") {
    if (rows.empty()) throw InvalidInput("no rows to render");
    const int width = 820, height = 540;
    const double ml = 70, mr = 160, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = rows.front().sweep_value, xmax = rows.back().sweep_value;
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const SweepRow& r : rows)
        for (const std::string& c : columns) {
            const auto it = r.values.find(c);
            if (it != r.values.end() && it->second) {
                ymin = std::min(ymin, *it->second);
                ymax = std::max(ymax, *it->second);
            }
        }
    if (!(ymin < ymax)) {
        ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0;
        ymax = ymin + 2.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    s << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!title.empty())
        s << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title
          << "</text>\n";
    // axes
    s << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 5.0;
        const double yv = ymin + (ymax - ymin) * k / 5.0;
        s << "<line x1=\"" << px(xv) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(xv) << "\" y2=\""
          << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 20
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
          << detail::format_sig12(std::round(xv * 1e6) / 1e6) << "</text>\n";
        s << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\"" << py(yv)
          << "\" stroke=\"black\"/>\n";
        char ybuf[32];
        std::snprintf(ybuf, sizeof(ybuf), "%.4g", yv);
        s << "<text x=\"" << ml - 9 << "\" y=\"" << py(yv) + 4
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << ybuf << "</text>\n";
    }
    // polylines
    int ci = 0;
    for (const std::string& c : columns) {
        std::ostringstream pts;
        bool any = false;
        for (const SweepRow& r : rows) {
            const auto it = r.values.find(c);
            if (it == r.values.end() || !it->second) continue;
            pts << px(r.sweep_value) << "," << py(*it->second) << " ";
            any = true;
        }
        const char* color = kColors[ci % 7];
        if (any)
            s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\""
              << pts.str() << "\"/>\n";
        const double ly = mt + 18.0 * ci;
        s << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 34 << "\" y2=\""
          << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << c << "</text>\n";
        ++ci;
    }
    s << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << s.str();
    if (!out) throw IoError("write failed for '" + path + "'");
}

/// Built-in sweep configurations mirroring the published figure captions.
/// Axis ranges are not stated there; the chosen defaults bracket every
/// quoted feature and are documented here explicitly.
inline SweepConfig figure_config(const std::string& id) {
    auto base = [&](Scenario scen, std::vector<Param> params, std::map<std::string, double> fixed,
                    std::string var, double from, double to, int points,
                    std::vector<std::string> bounds) {
        SweepConfig c;
        c.scenario = scen;
        c.params = std::move(params);
        c.fixed = std::move(fixed);
        c.sweep.variable = std::move(var);
        c.sweep.from = from;
        c.sweep.to = to;
        c.sweep.points = points;
        c.bounds = std::move(bounds);
        c.csv_path = "figure_" + id + ".csv";
        c.svg_path = "figure_" + id + ".svg";
        return c;
    };
    const std::vector<Param> d2 = {Param::Theta, Param::Phi};
    const std::vector<Param> d3 = {Param::Theta, Param::Phi, Param::AInv};
    const std::vector<std::string> b2 = {"sld", "rld", "hcrb", "nagaoka", "analytic"};
    const std::vector<std::string> b3 = {"sld", "rld", "hcrb", "nagaoka"};
    const double half_pi = M_PI / 2.0;
    const double th_lo = 0.1, th_hi = M_PI - 0.1;

    if (id == "1a") return base(Scenario::Unbounded, d2, {{"theta", half_pi}, {"phi", 0.0}, {"tau", 0.4}}, "a_inv", 0.05, 1.0, 60, b2);
    if (id == "1b") return base(Scenario::Unbounded, d2, {{"theta", half_pi}, {"phi", 0.0}, {"a_inv", 0.2}}, "tau", 0.05, 2.0, 100, b2);
    if (id == "1c") return base(Scenario::Unbounded, d2, {{"phi", 0.0}, {"a_inv", 0.2}, {"tau", 0.4}}, "theta", th_lo, th_hi, 100, b2);
    if (id == "2a") return base(Scenario::Unbounded, d3, {{"theta", half_pi}, {"phi", 0.0}, {"tau", 0.4}}, "a_inv", 0.05, 1.0, 60, b3);
    if (id == "2b") return base(Scenario::Unbounded, d3, {{"theta", half_pi}, {"phi", 0.0}, {"a_inv", 0.2}}, "tau", 0.05, 2.0, 100, b3);
    if (id == "2c") return base(Scenario::Unbounded, d3, {{"phi", 0.0}, {"a_inv", 0.2}, {"tau", 0.4}}, "theta", th_lo, th_hi, 100, b3);
    if (id == "3a") return base(Scenario::Bounded, d2, {{"theta", half_pi}, {"phi", 0.0}, {"tau", 1.0}, {"z", 0.5}}, "a_inv", 0.05, 1.0, 60, b3);
    if (id == "3b") return base(Scenario::Bounded, d2, {{"theta", half_pi}, {"phi", 0.0}, {"a_inv", 1.0}, {"z", 0.5}}, "tau", 0.05, 2.0, 100, b3);
    if (id == "3c") return base(Scenario::Bounded, d2, {{"phi", 0.0}, {"a_inv", 1.0}, {"tau", 1.0}, {"z", 0.5}}, "theta", th_lo, th_hi, 100, b3);
    if (id == "4a") return base(Scenario::Bounded, d3, {{"theta", half_pi}, {"phi", 0.0}, {"tau", 0.4}, {"z", 0.5}}, "a_inv", 0.05, 1.0, 60, b3);
    if (id == "4b") return base(Scenario::Bounded, d3, {{"theta", half_pi}, {"phi", 0.0}, {"a_inv", 0.2}, {"z", 0.5}}, "tau", 0.05, 2.0, 100, b3);
    if (id == "4c") return base(Scenario::Bounded, d3, {{"phi", 0.0}, {"a_inv", 0.2}, {"tau", 0.4}, {"z", 0.5}}, "theta", th_lo, th_hi, 100, b3);
    throw RangeError("unknown figure id '" + id + "' (expected 1a..4c)");
}

}  // namespace qbounds
