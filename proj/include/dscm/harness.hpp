#ifndef DSCM_HARNESS_HPP
#define DSCM_HARNESS_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "dscm/pipeline.hpp"

// Experiment harness: JSON-backed scenario configuration, named presets,
// parameter sweeps with per-seed repeats, and CSV/JSON result emission.

namespace dscm {

struct SweepSpec {
    std::string axis;            // dotted config path or a meta-axis; empty = single point
    std::vector<double> values;  // empty with empty axis = one point at the base config
};

struct ScenarioConfig {
    std::string name = "custom";
    Scheme scheme = Scheme::Spt;
    DscmConfig dscm;
    PilotDescriptor pilots;
    ImpairmentConfig imp;
    ExtractorConfig extractor;
    EqualizerConfig eq;
    bool compensate_skew = false;
    bool calibration_only = false;  // skew-estimator scenario: no data, no BER
    ObtbConfig obtb;
    SweepSpec sweep;
    size_t symbols_per_point = 1u << 17;
    size_t discard_symbols = 4096;
    std::vector<uint64_t> seeds{1, 2};
};

nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

// Set one configuration field by dotted path ("impairments.link.osnr_db").
// Meta-axes adjust several tributary delays at once:
//   rx_xy_skew_ps  - Y-rail delay relative to X (both Y tributaries), ps
//   iq_skew_ps     - Q-rail delay relative to I on both polarizations, ps
//   amp_imb_db     - Q-rail amplitude imbalance on both polarizations
//   phase_imb_deg  - quadrature phase error on both polarizations
// Throws std::invalid_argument for unknown keys.
ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& key,
                              const nlohmann::json& value);

struct ResultRow {
    std::string scenario;
    uint64_t seed = 0;
    std::string sweep_axis;
    double sweep_value = 0.0;
    double osnr_db = 0.0;
    double rsop_rad_s = 0.0;
    double pdl_db = 0.0;
    double rx_xy_skew_ps = 0.0;
    std::string scheme;
    double ber = std::numeric_limits<double>::quiet_NaN();
    double q_db = std::numeric_limits<double>::quiet_NaN();
    double skew_est_ps = std::numeric_limits<double>::quiet_NaN();
    std::string diagnostics;
};

// One row per (sweep value, seed), in deterministic order regardless of
// job count. A failed point carries its reason in diagnostics rather than
// aborting the sweep.
std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg, int jobs = 1);

std::vector<std::string> preset_names();
ScenarioConfig build_preset(const std::string& name);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& csv);
nlohmann::json rows_to_json(const std::vector<ResultRow>& rows);

}  // namespace dscm

#endif
