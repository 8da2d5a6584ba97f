#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dscm/harness.hpp"
#include "dscm/mgpd.hpp"

using nlohmann::json;

namespace {

json parse_set_value(const std::string& text) {
    // Numbers/bools/strings; bare words fall back to strings.
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        return text;
    }
}

dscm::ScenarioConfig load_config(const std::string& config_path, const std::string& preset,
                                 const std::vector<std::string>& sets) {
    dscm::ScenarioConfig cfg;
    if (!preset.empty()) cfg = dscm::build_preset(preset);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open config file: " + config_path);
        json j = json::parse(in);
        if (!preset.empty()) {
            // File entries override the preset.
            json base = dscm::scenario_to_json(cfg);
            base.merge_patch(j);
            j = base;
        }
        cfg = dscm::scenario_from_json(j);
    }
    for (const std::string& kv : sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects key=value, got: " + kv);
        cfg = dscm::apply_override(cfg, kv.substr(0, eq), parse_set_value(kv.substr(eq + 1)));
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-polarization DSCM link simulator"};
    app.require_subcommand(1);

    std::string config_path, preset, out_path, format = "csv";
    std::vector<std::string> sets;
    int jobs = 1;

    CLI::App* run = app.add_subcommand("run", "Run a scenario sweep");
    run->add_option("--config", config_path, "Scenario JSON file");
    run->add_option("--preset", preset, "Named preset to start from");
    run->add_option("--set", sets, "Override a config field (key=value)");
    run->add_option("--out", out_path, "Output path (default stdout)");
    run->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    CLI::App* lp = app.add_subcommand("list-presets", "List preset scenario names");

    std::string cal_config, cal_preset;
    std::vector<std::string> cal_sets;
    CLI::App* cal = app.add_subcommand("calibrate", "Run one skew calibration, print JSON");
    cal->add_option("--config", cal_config, "Scenario JSON file");
    cal->add_option("--preset", cal_preset, "Named preset to start from");
    cal->add_option("--set", cal_sets, "Override a config field (key=value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lp->parsed()) {
            for (const std::string& n : dscm::preset_names()) std::cout << n << "\n";
            return 0;
        }
        if (run->parsed()) {
            if (config_path.empty() && preset.empty())
                throw std::runtime_error("run needs --config and/or --preset");
            dscm::ScenarioConfig cfg = load_config(config_path, preset, sets);
            std::vector<dscm::ResultRow> rows = dscm::run_scenario(cfg, jobs);
            std::string payload = format == "json" ? dscm::rows_to_json(rows).dump(2) + "\n"
                                                   : dscm::rows_to_csv(rows);
            if (out_path.empty()) {
                std::cout << payload;
            } else {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot write: " + out_path);
                out << payload;
            }
            return 0;
        }
        if (cal->parsed()) {
            dscm::ScenarioConfig cfg = load_config(cal_config, cal_preset, cal_sets);
            dscm::ObtbConfig oc = cfg.obtb;
            dscm::RsopPdlParams rotation{0.0, std::numbers::pi / 4.0, 0.3, 0.2, 0.0, 0.0};
            dscm::SkewEstimate est = dscm::run_obtb_calibration(cfg.imp.frontend, rotation, oc);
            std::cout << est.to_json() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
