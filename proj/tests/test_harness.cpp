#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dscm/harness.hpp"

using namespace dscm;

namespace {

// small fast scenario: calibration-only runs avoid the full data pipeline
ScenarioConfig quick_calibration() {
    ScenarioConfig cfg;
    cfg.name = "quick";
    cfg.calibration_only = true;
    cfg.obtb.osnr_db = 26.0;
    cfg.sweep.axis = "rx_xy_skew_ps";
    cfg.sweep.values = {-10.0, 0.0, 10.0};
    cfg.seeds = {1, 2};
    return cfg;
}

const char* kHeader =
    "scenario,seed,sweep_axis,sweep_value,osnr_db,rsop_rad_s,pdl_db,rx_xy_skew_ps,"
    "scheme,ber,q_db,skew_est_ps,diagnostics";

}  // namespace

TEST_CASE("csv header is fixed and zero rows emit header only") {
    auto csv = rows_to_csv({});
    CHECK(csv == std::string(kHeader) + "\n");
}

TEST_CASE("csv round trip preserves every field") {
    ResultRow a;
    a.scenario = "fig12";
    a.seed = 7;
    a.sweep_axis = "rx_xy_skew_ps";
    a.sweep_value = -12.5;
    a.osnr_db = 26.0;
    a.rsop_rad_s = 1e6;
    a.pdl_db = 1.0;
    a.rx_xy_skew_ps = -12.5;
    a.scheme = "SPT";
    a.ber = 3.81e-3;
    a.q_db = 8.53;
    a.skew_est_ps = -12.503;
    ResultRow b;  // error row: NaNs become "NA"
    b.scenario = "fig12";
    b.seed = 8;
    b.sweep_axis = "rx_xy_skew_ps";
    b.scheme = "SPT";
    b.diagnostics = "sync failed";

    auto parsed = rows_from_csv(rows_to_csv({a, b}));
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].scenario == a.scenario);
    CHECK(parsed[0].seed == a.seed);
    CHECK(parsed[0].sweep_axis == a.sweep_axis);
    CHECK(parsed[0].sweep_value == doctest::Approx(a.sweep_value));
    CHECK(parsed[0].ber == doctest::Approx(a.ber).epsilon(1e-2));
    CHECK(parsed[0].skew_est_ps == doctest::Approx(a.skew_est_ps).epsilon(1e-3));
    CHECK(std::isnan(parsed[1].ber));
    CHECK(parsed[1].diagnostics == "sync failed");
}

TEST_CASE("csv numeric formatting: ber significant digits, skew in ps") {
    ResultRow r;
    r.ber = 1.2345e-4;
    r.skew_est_ps = 3.14159;
    auto csv = rows_to_csv({r});
    CHECK(csv.find("0.0001234") != std::string::npos);  // >= 3 significant digits
    CHECK(csv.find("3.142") != std::string::npos);      // ps with 3 decimals
}

TEST_CASE("presets: known names, pinned fields, unknown rejected") {
    auto names = preset_names();
    for (const char* want : {"fig5", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13",
                             "fig14", "fig15", "exp18c"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());

    CHECK(build_preset("fig5").dscm.total_baud == doctest::Approx(50e9));
    CHECK(build_preset("fig12").pilots.f1 == doctest::Approx(2e9));
    CHECK(build_preset("exp18c").dscm.total_baud == doctest::Approx(35e9));

    try {
        (void)build_preset("fig99");
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        // the message must carry the list of valid names
        CHECK(std::string(e.what()).find("fig5") != std::string::npos);
        CHECK(std::string(e.what()).find("exp18c") != std::string::npos);
    }
}

TEST_CASE("scenario json round trip") {
    auto cfg = build_preset("fig11");
    auto back = scenario_from_json(scenario_to_json(cfg));
    CHECK(back.name == cfg.name);
    CHECK(back.scheme == cfg.scheme);
    CHECK(back.sweep.axis == cfg.sweep.axis);
    CHECK(back.sweep.values == cfg.sweep.values);
    CHECK(back.imp.rsop.omega == doctest::Approx(cfg.imp.rsop.omega));
    CHECK(back.pilots.f1 == doctest::Approx(cfg.pilots.f1));
    CHECK(back.symbols_per_point == cfg.symbols_per_point);
    CHECK(back.seeds == cfg.seeds);
}

TEST_CASE("apply_override: dotted paths, meta-axes, unknown key rejected") {
    auto cfg = build_preset("fig10");
    auto a = apply_override(cfg, "impairments.link.osnr_db", 24.0);
    CHECK(a.imp.link.osnr_db == doctest::Approx(24.0));

    auto b = apply_override(cfg, "rx_xy_skew_ps", 5.0);
    CHECK(b.imp.frontend.rx_xy_skew() == doctest::Approx(5e-12));

    CHECK_THROWS_AS((void)apply_override(cfg, "impairments.no_such_field", 1.0),
                    std::invalid_argument);
}

TEST_CASE("empty sweep values produce an empty row list") {
    auto cfg = quick_calibration();
    cfg.sweep.values.clear();
    auto rows = run_scenario(cfg);
    CHECK(rows.empty());
}

TEST_CASE("run_scenario: one row per sweep value and seed, in order") {
    auto cfg = quick_calibration();
    auto rows = run_scenario(cfg);
    REQUIRE(rows.size() == cfg.sweep.values.size() * cfg.seeds.size());
    size_t i = 0;
    for (double v : cfg.sweep.values)
        for (uint64_t s : cfg.seeds) {
            CHECK(rows[i].sweep_value == doctest::Approx(v));
            CHECK(rows[i].seed == s);
            CHECK(rows[i].scenario == "quick");
            // calibration rows report the estimate, not a BER
            CHECK(std::abs(rows[i].skew_est_ps - v) < 0.1);
            ++i;
        }
}

TEST_CASE("reproducibility: identical config gives byte-identical csv") {
    auto cfg = quick_calibration();
    auto a = rows_to_csv(run_scenario(cfg));
    auto b = rows_to_csv(run_scenario(cfg));
    CHECK(a == b);
}

TEST_CASE("parallel execution matches sequential row for row") {
    auto cfg = quick_calibration();
    auto seq = rows_to_csv(run_scenario(cfg, 1));
    auto par = rows_to_csv(run_scenario(cfg, 4));
    CHECK(seq == par);
}

TEST_CASE("a failing sweep point yields an NA row, not an abort") {
    auto cfg = quick_calibration();
    // an off-grid tone frequency fails that point; the sweep keeps going
    cfg.sweep.axis = "obtb.f1";
    cfg.sweep.values = {2.00001e9, 2e9};
    cfg.seeds = {1};
    auto rows = run_scenario(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(std::isnan(rows[0].skew_est_ps));
    CHECK(!rows[0].diagnostics.empty());
    CHECK(!std::isnan(rows[1].skew_est_ps));
}
