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
// qbounds command-line interface:
//   qbounds report --config <file.json>   single-point BoundReport as JSON
//   qbounds sweep  --config <file.json>   CSV (and optional SVG) sweep
//   qbounds figure --id {1a..4c}          built-in figure sweeps
// Exit codes: 0 success, 2 schema/config errors, 3 when solver failures
// exceed 10% of the grid points.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbounds/sweep.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qbounds::IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json report_json(const qbounds::BoundReport& r) {
    nlohmann::json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    put("c_sld", r.c_sld);
    put("c_rld", r.c_rld);
    put("c_upper", r.c_upper);
    put("c_hcrb", r.c_hcrb);
    put("c_nagaoka", r.c_nagaoka);
    put("analytic_hcrb", r.analytic_hcrb);
    put("analytic_nb", r.analytic_nb);
    j["hierarchy_ok"] = r.hierarchy_ok;
    j["hierarchy_tol"] = r.hierarchy_tol;
    return j;
}

int run_report(const std::string& config_path) {
    const nlohmann::json j = nlohmann::json::parse(slurp(config_path));
    if (!j.is_object()) throw qbounds::SchemaError("top-level document must be an object");
    qbounds::detail::reject_unknown_keys(j, {"scenario", "params", "fixed"}, "");

    qbounds::Scenario scen;
    const std::string s = j.at("scenario").get<std::string>();
    if (s == "unbounded")
        scen = qbounds::Scenario::Unbounded;
    else if (s == "bounded")
        scen = qbounds::Scenario::Bounded;
    else
        throw qbounds::SchemaError("/scenario must be 'unbounded' or 'bounded'");

    std::vector<qbounds::Param> params;
    for (const auto& name : j.at("params")) params.push_back(qbounds::detail::param_from_name(name.get<std::string>()));
    if (params.empty()) throw qbounds::RangeError("/params must be non-empty");

    const auto& f = j.at("fixed");
    qbounds::detail::reject_unknown_keys(f, qbounds::detail::kFixedNames, "/fixed");
    auto get = [&](const char* key, std::optional<double> fallback) {
        if (f.contains(key)) return f.at(key).get<double>();
        if (fallback) return *fallback;
        throw qbounds::RangeError(std::string("/fixed/") + key + " is required");
    };
    const qbounds::DetectorParams p(get("theta", std::nullopt), get("phi", 0.0), get("a_inv", std::nullopt),
                                    get("tau", std::nullopt), scen, get("z", 0.0), get("omega_eff", 0.0));
    const qbounds::StatModel m = qbounds::stat_model(p, params);
    const qbounds::BoundReport r = qbounds::bound_report(m, {}, p);
    std::cout << report_json(r).dump(2) << "\n";
    return 0;
}

int run_sweep_cmd(const qbounds::SweepConfig& cfg, int jobs) {
    const std::vector<qbounds::SweepRow> rows = qbounds::run_sweep(cfg, jobs);
    const std::vector<std::string> cols = qbounds::sweep_columns(cfg);
    qbounds::write_csv(rows, cols, cfg.csv_path);
    if (cfg.svg_path) qbounds::render_svg(rows, cols, *cfg.svg_path, cfg.sweep.variable + " sweep");
    int failures = 0;
    for (const qbounds::SweepRow& r : rows) failures += r.failed ? 1 : 0;
    if (failures * 10 > static_cast<int>(rows.size())) {
        std::cerr << "qbounds: " << failures << "/" << rows.size() << " grid points failed\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimation-error bounds for a uniformly accelerated two-level detector"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "number of worker threads")->check(CLI::PositiveNumber);

    std::string report_config, sweep_config, figure_id;
    CLI::App* rep = app.add_subcommand("report", "print a single-point bound report as JSON");
    rep->add_option("--config", report_config, "JSON config file")->required();
    CLI::App* swp = app.add_subcommand("sweep", "run a sweep from a JSON config");
    swp->add_option("--config", sweep_config, "JSON config file")->required();
    CLI::App* fig = app.add_subcommand("figure", "run a built-in figure sweep");
    fig->add_option("--id", figure_id, "figure id: 1a..4c")->required();
    for (CLI::App* sub : {rep, swp, fig}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    try {
        if (rep->parsed()) return run_report(report_config);
        if (swp->parsed()) return run_sweep_cmd(qbounds::parse_config(slurp(sweep_config)), jobs);
        if (fig->parsed()) return run_sweep_cmd(qbounds::figure_config(figure_id), jobs);
    } catch (const qbounds::SchemaError& e) {
        std::cerr << "qbounds: config error: " << e.what() << "\n";
        return 2;
    } catch (const qbounds::RangeError& e) {
        std::cerr << "qbounds: config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "qbounds: config error: " << e.what() << "\n";
        return 2;
    } catch (const qbounds::Error& e) {
        std::cerr << "qbounds: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
