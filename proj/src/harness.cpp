#include "dscm/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dscm {

using nlohmann::json;

namespace {

constexpr RsopPdlParams kObtbRotation{0.0, std::numbers::pi / 4.0, 0.3, 0.2, 0.0, 0.0};

uint64_t calib_seed(uint64_t seed) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * ('C' + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    return z ^ (z >> 31);
}

json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double num_from(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (j.at(key).is_null()) return std::numeric_limits<double>::infinity();
    return j.at(key).get<double>();
}

std::string lpf_kind_name(LpfKind k) {
    switch (k) {
        case LpfKind::SinglePole: return "single_pole";
        case LpfKind::MovingAverage: return "moving_average";
        case LpfKind::Fir: return "fir";
    }
    throw std::invalid_argument("unknown lpf kind");
}

LpfKind lpf_kind_from(const std::string& s) {
    if (s == "single_pole") return LpfKind::SinglePole;
    if (s == "moving_average") return LpfKind::MovingAverage;
    if (s == "fir") return LpfKind::Fir;
    throw std::invalid_argument("unknown lpf kind: " + s);
}

std::string csv_num(double v, const char* fmt_spec) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt_spec, v);
    return buf;
}

double csv_parse_num(const std::string& s) {
    if (s == "NA" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(s);
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return out;
}

}  // namespace

json scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["scheme"] = scheme_name(c.scheme);
    j["dscm"] = {{"total_baud", c.dscm.total_baud},
                 {"num_subcarriers", c.dscm.num_subcarriers},
                 {"rolloff", c.dscm.rolloff},
                 {"guard_band", c.dscm.guard_band},
                 {"sps", c.dscm.sps}};
    j["pilots"] = {{"f1", c.pilots.f1}, {"f2", c.pilots.f2}, {"psr_db", c.pilots.psr_db}};
    j["impairments"] = {
        {"rsop",
         {{"pdl_db", c.imp.rsop.pdl_db},
          {"alpha0", c.imp.rsop.alpha0},
          {"beta0", c.imp.rsop.beta0},
          {"eta0", c.imp.rsop.eta0},
          {"omega", c.imp.rsop.omega},
          {"dgd", c.imp.rsop.dgd}}},
        {"link",
         {{"fiber_km", c.imp.link.fiber_km},
          {"dispersion_ps_nm_km", c.imp.link.dispersion_ps_nm_km},
          {"center_wavelength_nm", c.imp.link.center_wavelength_nm},
          {"linewidth_hz", c.imp.link.linewidth_hz},
          {"freq_offset_hz", c.imp.link.freq_offset_hz},
          {"osnr_db", num_or_null(c.imp.link.osnr_db)}}},
        {"frontend",
         {{"tau_rxi", c.imp.frontend.tau_rxi},
          {"tau_rxq", c.imp.frontend.tau_rxq},
          {"tau_ryi", c.imp.frontend.tau_ryi},
          {"tau_ryq", c.imp.frontend.tau_ryq},
          {"tau_txi", c.imp.frontend.tau_txi},
          {"amp_imb_x_db", c.imp.frontend.amp_imb_x_db},
          {"amp_imb_y_db", c.imp.frontend.amp_imb_y_db},
          {"phase_imb_x_deg", c.imp.frontend.phase_imb_x_deg},
          {"phase_imb_y_deg", c.imp.frontend.phase_imb_y_deg}}}};
    j["extractor"] = {{"lpf_bandwidth_hz", c.extractor.lpf_bandwidth_hz},
                      {"lpf_kind", lpf_kind_name(c.extractor.lpf_kind)},
                      {"fir_taps", c.extractor.fir_taps},
                      {"decimation", c.extractor.decimation}};
    j["equalizer"] = {{"taps", c.eq.taps},
                      {"mu_cma", c.eq.mu_cma},
                      {"mu_cmma", c.eq.mu_cmma},
                      {"cma_pretrain_symbols", c.eq.cma_pretrain_symbols},
                      {"bps_test_phases", c.eq.bps_test_phases},
                      {"bps_window", c.eq.bps_window}};
    j["compensate_skew"] = c.compensate_skew;
    j["calibration_only"] = c.calibration_only;
    j["obtb"] = {{"f1", c.obtb.f1},
                 {"sample_rate", c.obtb.sample_rate},
                 {"num_samples", c.obtb.num_samples},
                 {"osnr_db", num_or_null(c.obtb.osnr_db)}};
    j["sweep"] = {{"axis", c.sweep.axis}, {"values", c.sweep.values}};
    j["symbols_per_point"] = c.symbols_per_point;
    j["discard_symbols"] = c.discard_symbols;
    j["seeds"] = c.seeds;
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig c;
    c.name = j.value("name", c.name);
    if (j.contains("scheme")) c.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    if (j.contains("dscm")) {
        const json& d = j.at("dscm");
        c.dscm.total_baud = d.value("total_baud", c.dscm.total_baud);
        c.dscm.num_subcarriers = d.value("num_subcarriers", c.dscm.num_subcarriers);
        c.dscm.rolloff = d.value("rolloff", c.dscm.rolloff);
        c.dscm.guard_band = d.value("guard_band", c.dscm.guard_band);
        c.dscm.sps = d.value("sps", c.dscm.sps);
    }
    if (j.contains("pilots")) {
        const json& p = j.at("pilots");
        c.pilots.f1 = p.value("f1", c.pilots.f1);
        c.pilots.f2 = p.value("f2", c.pilots.f2);
        c.pilots.psr_db = p.value("psr_db", c.pilots.psr_db);
    }
    if (j.contains("impairments")) {
        const json& i = j.at("impairments");
        if (i.contains("rsop")) {
            const json& r = i.at("rsop");
            c.imp.rsop.pdl_db = r.value("pdl_db", c.imp.rsop.pdl_db);
            c.imp.rsop.alpha0 = r.value("alpha0", c.imp.rsop.alpha0);
            c.imp.rsop.beta0 = r.value("beta0", c.imp.rsop.beta0);
            c.imp.rsop.eta0 = r.value("eta0", c.imp.rsop.eta0);
            c.imp.rsop.omega = r.value("omega", c.imp.rsop.omega);
            c.imp.rsop.dgd = r.value("dgd", c.imp.rsop.dgd);
        }
        if (i.contains("link")) {
            const json& l = i.at("link");
            c.imp.link.fiber_km = l.value("fiber_km", c.imp.link.fiber_km);
            c.imp.link.dispersion_ps_nm_km =
                l.value("dispersion_ps_nm_km", c.imp.link.dispersion_ps_nm_km);
            c.imp.link.center_wavelength_nm =
                l.value("center_wavelength_nm", c.imp.link.center_wavelength_nm);
            c.imp.link.linewidth_hz = l.value("linewidth_hz", c.imp.link.linewidth_hz);
            c.imp.link.freq_offset_hz = l.value("freq_offset_hz", c.imp.link.freq_offset_hz);
            c.imp.link.osnr_db = num_from(l, "osnr_db", c.imp.link.osnr_db);
        }
        if (i.contains("frontend")) {
            const json& f = i.at("frontend");
            c.imp.frontend.tau_rxi = f.value("tau_rxi", c.imp.frontend.tau_rxi);
            c.imp.frontend.tau_rxq = f.value("tau_rxq", c.imp.frontend.tau_rxq);
            c.imp.frontend.tau_ryi = f.value("tau_ryi", c.imp.frontend.tau_ryi);
            c.imp.frontend.tau_ryq = f.value("tau_ryq", c.imp.frontend.tau_ryq);
            c.imp.frontend.tau_txi = f.value("tau_txi", c.imp.frontend.tau_txi);
            c.imp.frontend.amp_imb_x_db = f.value("amp_imb_x_db", c.imp.frontend.amp_imb_x_db);
            c.imp.frontend.amp_imb_y_db = f.value("amp_imb_y_db", c.imp.frontend.amp_imb_y_db);
            c.imp.frontend.phase_imb_x_deg =
                f.value("phase_imb_x_deg", c.imp.frontend.phase_imb_x_deg);
            c.imp.frontend.phase_imb_y_deg =
                f.value("phase_imb_y_deg", c.imp.frontend.phase_imb_y_deg);
        }
    }
    if (j.contains("extractor")) {
        const json& e = j.at("extractor");
        c.extractor.lpf_bandwidth_hz = e.value("lpf_bandwidth_hz", c.extractor.lpf_bandwidth_hz);
        if (e.contains("lpf_kind"))
            c.extractor.lpf_kind = lpf_kind_from(e.at("lpf_kind").get<std::string>());
        c.extractor.fir_taps = e.value("fir_taps", c.extractor.fir_taps);
        c.extractor.decimation = e.value("decimation", c.extractor.decimation);
    }
    if (j.contains("equalizer")) {
        const json& e = j.at("equalizer");
        c.eq.taps = e.value("taps", c.eq.taps);
        c.eq.mu_cma = e.value("mu_cma", c.eq.mu_cma);
        c.eq.mu_cmma = e.value("mu_cmma", c.eq.mu_cmma);
        c.eq.cma_pretrain_symbols = e.value("cma_pretrain_symbols", c.eq.cma_pretrain_symbols);
        c.eq.bps_test_phases = e.value("bps_test_phases", c.eq.bps_test_phases);
        c.eq.bps_window = e.value("bps_window", c.eq.bps_window);
    }
    c.compensate_skew = j.value("compensate_skew", c.compensate_skew);
    c.calibration_only = j.value("calibration_only", c.calibration_only);
    if (j.contains("obtb")) {
        const json& o = j.at("obtb");
        c.obtb.f1 = o.value("f1", c.obtb.f1);
        c.obtb.sample_rate = o.value("sample_rate", c.obtb.sample_rate);
        c.obtb.num_samples = o.value("num_samples", c.obtb.num_samples);
        c.obtb.osnr_db = num_from(o, "osnr_db", c.obtb.osnr_db);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        c.sweep.axis = s.value("axis", c.sweep.axis);
        if (s.contains("values")) c.sweep.values = s.at("values").get<std::vector<double>>();
    }
    c.symbols_per_point = j.value("symbols_per_point", c.symbols_per_point);
    c.discard_symbols = j.value("discard_symbols", c.discard_symbols);
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    return c;
}

ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& key,
                              const json& value) {
    ScenarioConfig c = cfg;
    auto as_double = [&]() { return value.get<double>(); };
    if (key == "rx_xy_skew_ps") {
        double tau = as_double() * 1e-12;
        double iq_x = c.imp.frontend.tau_rxq - c.imp.frontend.tau_rxi;
        double iq_y = c.imp.frontend.tau_ryq - c.imp.frontend.tau_ryi;
        c.imp.frontend.tau_ryi = c.imp.frontend.tau_rxi + tau;
        c.imp.frontend.tau_ryq = c.imp.frontend.tau_ryi + iq_y;
        (void)iq_x;
        return c;
    }
    if (key == "iq_skew_ps") {
        double tau = as_double() * 1e-12;
        c.imp.frontend.tau_rxq = c.imp.frontend.tau_rxi + tau;
        c.imp.frontend.tau_ryq = c.imp.frontend.tau_ryi + tau;
        return c;
    }
    if (key == "amp_imb_db") {
        c.imp.frontend.amp_imb_x_db = as_double();
        c.imp.frontend.amp_imb_y_db = as_double();
        return c;
    }
    if (key == "phase_imb_deg") {
        c.imp.frontend.phase_imb_x_deg = as_double();
        c.imp.frontend.phase_imb_y_deg = as_double();
        return c;
    }
    json j = scenario_to_json(c);
    std::string path = "/" + key;
    for (char& ch : path)
        if (ch == '.') ch = '/';
    json::json_pointer ptr(path);
    try {
        (void)j.at(ptr);  // reject keys that do not already exist
    } catch (const json::exception&) {
        throw std::invalid_argument("unknown config key: " + key);
    }
    j[ptr] = value;
    return scenario_from_json(j);
}

std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg, int jobs) {
    struct Task {
        bool has_value = false;
        double value = 0.0;
        uint64_t seed = 0;
    };
    std::vector<Task> tasks;
    if (cfg.sweep.axis.empty()) {
        for (uint64_t s : cfg.seeds) tasks.push_back({false, 0.0, s});
    } else {
        // Validate the axis before burning any compute.
        double probe = cfg.sweep.values.empty() ? 0.0 : cfg.sweep.values.front();
        (void)apply_override(cfg, cfg.sweep.axis, probe);
        for (double v : cfg.sweep.values)
            for (uint64_t s : cfg.seeds) tasks.push_back({true, v, s});
    }

    std::vector<ResultRow> rows(tasks.size());
    std::atomic<size_t> next{0};

    auto run_point = [&](const Task& t) {
        ResultRow row;
        row.scenario = cfg.name;
        row.seed = t.seed;
        row.sweep_axis = cfg.sweep.axis;
        row.sweep_value = t.has_value ? t.value : std::numeric_limits<double>::quiet_NaN();
        try {
            ScenarioConfig pc =
                t.has_value ? apply_override(cfg, cfg.sweep.axis, t.value) : cfg;
            row.osnr_db = pc.calibration_only ? pc.obtb.osnr_db : pc.imp.link.osnr_db;
            row.rsop_rad_s = pc.imp.rsop.omega;
            row.pdl_db = pc.imp.rsop.pdl_db;
            row.rx_xy_skew_ps = pc.imp.frontend.rx_xy_skew() * 1e12;
            if (pc.calibration_only) {
                row.scheme = "MGPD";
                ObtbConfig oc = pc.obtb;
                oc.seed = calib_seed(t.seed);
                SkewEstimate est = run_obtb_calibration(pc.imp.frontend, kObtbRotation, oc);
                row.skew_est_ps = est.tau_xy * 1e12;
            } else {
                row.scheme = scheme_name(pc.scheme);
                TrialConfig tc;
                tc.scheme = pc.scheme;
                tc.dscm = pc.dscm;
                tc.pilots = pc.pilots;
                tc.imp = pc.imp;
                tc.extractor = pc.extractor;
                tc.eq = pc.eq;
                tc.aggregate_symbols = pc.symbols_per_point;
                tc.seed = t.seed;
                tc.discard_symbols = pc.discard_symbols;
                tc.compensate_skew = pc.compensate_skew;
                tc.obtb = pc.obtb;
                TrialResult res = run_data_trial(tc);
                row.ber = res.ber.aggregate_ber();
                row.q_db = res.ber.q_db();
                row.skew_est_ps = res.skew_est_ps;
                row.diagnostics = res.diagnostics;
                if (res.ber.low_confidence) {
                    if (!row.diagnostics.empty()) row.diagnostics += "; ";
                    row.diagnostics += "fewer than 10 bit errors counted";
                }
            }
        } catch (const std::exception& e) {
            row.ber = std::numeric_limits<double>::quiet_NaN();
            row.q_db = std::numeric_limits<double>::quiet_NaN();
            row.diagnostics = e.what();
        }
        return row;
    };

    int n_threads = std::max(1, jobs);
    if (static_cast<size_t>(n_threads) > tasks.size())
        n_threads = static_cast<int>(std::max<size_t>(1, tasks.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= tasks.size()) break;
                rows[i] = run_point(tasks[i]);
            }
        });
    for (auto& th : pool) th.join();
    return rows;
}

namespace {

ScenarioConfig ber_base() {
    ScenarioConfig c;
    c.scheme = Scheme::Spt;
    c.imp.rsop = {0.0, 0.6, 0.35, 0.2, 1e6, 0.0};
    c.imp.link.osnr_db = 22.0;
    c.imp.link.freq_offset_hz = 1e9;
    // Narrow pilot filter: keeps demultiplex crosstalk well below the signal
    // SNR near the FEC threshold. Cheap because filtering is FFT-based.
    c.extractor.lpf_bandwidth_hz = 25e6;
    c.extractor.fir_taps = 8191;
    // Pilot a bit above the type default: the demux noise floor scales with
    // 1/pilot power and would otherwise show up as a visible BER tilt when the
    // channel attenuates the X rail (e.g. negative PDL). Costs ~0.1 dB of data SNR.
    c.pilots.psr_db = -7.0;
    return c;
}

ScenarioConfig calib_base() {
    ScenarioConfig c;
    c.calibration_only = true;
    c.obtb.osnr_db = 26.0;
    c.imp.link.osnr_db = 26.0;
    c.pilots.scheme = PilotScheme::MgpdTraining;
    c.pilots.f1 = c.obtb.f1;  // training tone frequency, echoed for transparency
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig5", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15",
            "exp18c"};
}

ScenarioConfig build_preset(const std::string& name) {
    if (name == "fig5") {
        ScenarioConfig c = ber_base();
        c.name = name;
        c.sweep = {"impairments.link.osnr_db", {20, 21, 22, 23, 24, 25, 26}};
        return c;
    }
    if (name == "fig8") {
        ScenarioConfig c = ber_base();
        c.name = name;
        c.sweep = {"dscm.guard_band", {0.0, 100e6, 200e6, 400e6}};
        return c;
    }
    if (name == "fig9") {
        ScenarioConfig c = ber_base();
        c.name = name;
        // Pilots on the spectral nulls between subcarriers, one per side.
        c.pilots.f1 = c.dscm.subcarrier_spacing();
        c.pilots.f2 = -c.dscm.subcarrier_spacing();
        c.sweep = {"impairments.rsop.omega", {1e4, 1e5, 1e6, 1e7}};
        return c;
    }
    if (name == "fig10") {
        ScenarioConfig c = ber_base();
        c.name = name;
        c.sweep = {"impairments.rsop.pdl_db", {-3, -2, -1, 0, 1, 2, 3}};
        return c;
    }
    if (name == "fig11") {
        ScenarioConfig c = ber_base();
        c.name = name;
        c.imp.rsop.omega = 1e7;
        c.pilots.f1 = c.dscm.subcarrier_spacing();
        c.sweep = {"impairments.link.osnr_db", {20, 21, 22, 23, 24, 25, 26, 27}};
        return c;
    }
    if (name == "fig12") {
        ScenarioConfig c = calib_base();
        c.name = name;
        c.sweep = {"rx_xy_skew_ps", {-30, -20, -10, 0, 10, 20, 30}};
        return c;
    }
    if (name == "fig13") {
        ScenarioConfig c = calib_base();
        c.name = name;
        c.imp.frontend.tau_ryi = 5e-12;
        c.imp.frontend.tau_ryq = 5e-12;
        c.sweep = {"iq_skew_ps", {-10, -5, 0, 5, 10}};
        return c;
    }
    if (name == "fig14") {
        ScenarioConfig c = calib_base();
        c.name = name;
        c.imp.frontend.tau_ryi = 5e-12;
        c.imp.frontend.tau_ryq = 10e-12;
        c.imp.frontend.tau_rxq = 5e-12;
        c.imp.frontend.amp_imb_x_db = 2.0;
        c.imp.frontend.amp_imb_y_db = 2.0;
        c.imp.frontend.phase_imb_x_deg = 10.0;
        c.imp.frontend.phase_imb_y_deg = 10.0;
        c.sweep = {"obtb.osnr_db", {12, 14, 16, 18, 20, 22, 24, 26}};
        return c;
    }
    if (name == "fig15") {
        ScenarioConfig c = ber_base();
        c.name = name;
        c.imp.rsop.omega = 1e7;
        c.pilots.f1 = c.dscm.subcarrier_spacing();
        c.compensate_skew = true;
        c.sweep = {"rx_xy_skew_ps", {-3, -2, -1, 0, 1, 2, 3}};
        return c;
    }
    if (name == "exp18c") {
        ScenarioConfig c = ber_base();
        c.name = name;
        c.dscm.total_baud = 35e9;
        c.imp.link.osnr_db = 28.0;
        c.sweep = {"impairments.rsop.omega", {1e4, 1e5, 1e6, 1e7}};
        return c;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset: " + name + " (valid: " + known + ")");
}

static const char* kCsvHeader =
    "scenario,seed,sweep_axis,sweep_value,osnr_db,rsop_rad_s,pdl_db,rx_xy_skew_ps,scheme,ber,"
    "q_db,skew_est_ps,diagnostics";

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        out << sanitize(r.scenario) << ',' << r.seed << ',' << sanitize(r.sweep_axis) << ','
            << csv_num(r.sweep_value, "%.10g") << ',' << csv_num(r.osnr_db, "%.10g") << ','
            << csv_num(r.rsop_rad_s, "%.10g") << ',' << csv_num(r.pdl_db, "%.10g") << ','
            << csv_num(r.rx_xy_skew_ps, "%.6g") << ',' << sanitize(r.scheme) << ','
            << csv_num(r.ber, "%.4g") << ',' << csv_num(r.q_db, "%.4g") << ','
            << csv_num(r.skew_est_ps, "%.3f") << ',' << sanitize(r.diagnostics) << "\n";
    }
    return out.str();
}

std::vector<ResultRow> rows_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        size_t start = 0;
        for (size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                f.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (f.size() != 13) throw std::invalid_argument("malformed CSV row");
        ResultRow r;
        r.scenario = f[0];
        r.seed = std::stoull(f[1]);
        r.sweep_axis = f[2];
        r.sweep_value = csv_parse_num(f[3]);
        r.osnr_db = csv_parse_num(f[4]);
        r.rsop_rad_s = csv_parse_num(f[5]);
        r.pdl_db = csv_parse_num(f[6]);
        r.rx_xy_skew_ps = csv_parse_num(f[7]);
        r.scheme = f[8];
        r.ber = csv_parse_num(f[9]);
        r.q_db = csv_parse_num(f[10]);
        r.skew_est_ps = csv_parse_num(f[11]);
        r.diagnostics = f[12];
        rows.push_back(std::move(r));
    }
    return rows;
}

json rows_to_json(const std::vector<ResultRow>& rows) {
    json arr = json::array();
    for (const ResultRow& r : rows) {
        json j;
        j["scenario"] = r.scenario;
        j["seed"] = r.seed;
        j["sweep_axis"] = r.sweep_axis;
        j["sweep_value"] = num_or_null(r.sweep_value);
        j["osnr_db"] = num_or_null(r.osnr_db);
        j["rsop_rad_s"] = r.rsop_rad_s;
        j["pdl_db"] = r.pdl_db;
        j["rx_xy_skew_ps"] = r.rx_xy_skew_ps;
        j["scheme"] = r.scheme;
        j["ber"] = num_or_null(r.ber);
        j["q_db"] = num_or_null(r.q_db);
        j["skew_est_ps"] = num_or_null(r.skew_est_ps);
        j["diagnostics"] = r.diagnostics;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace dscm
