// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure. Uses the experiment presets at reduced-but-sufficient grids so the
// whole run fits a workstation budget.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dscm/harness.hpp"
#include "dscm/mgpd.hpp"
#include "dscm/pipeline.hpp"
#include "dscm/polaris.hpp"
#include "dscm/signal.hpp"
#include "dscm/txdsp.hpp"

using namespace dscm;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFec = 3.8e-3;
// bits per data trial entering each seed's aggregate BER (8 cells x ~28.5k
// symbols x 4 bits); used for binomial confidence bands
constexpr double kBitsPerTrial = 9.0e5;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("CRITERION %2d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// seed-mean BER per sweep value, in sweep order
std::map<double, double> seed_mean_ber(const std::vector<ResultRow>& rows) {
    std::map<double, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        if (std::isnan(r.ber)) continue;
        acc[r.sweep_value].first += r.ber;
        acc[r.sweep_value].second += 1;
    }
    std::map<double, double> out;
    for (auto& [v, pr] : acc) out[v] = pr.first / pr.second;
    return out;
}

// OSNR where the seed-mean BER curve crosses the FEC threshold, by
// log-linear interpolation; NaN when the curve never crosses
double fec_crossing(const std::map<double, double>& curve) {
    std::vector<std::pair<double, double>> p(curve.begin(), curve.end());
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        const double b0 = p[i].second, b1 = p[i + 1].second;
        if (b0 >= kFec && b1 < kFec && b0 > 0.0 && b1 > 0.0) {
            const double t = (std::log(kFec) - std::log(b0)) / (std::log(b1) - std::log(b0));
            return p[i].first + t * (p[i + 1].first - p[i].first);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ScenarioConfig with_sweep(ScenarioConfig c, std::vector<double> values) {
    c.sweep.values = std::move(values);
    return c;
}

const RsopPdlParams kCalRotation{0.0, kPi / 4.0, 0.3, 0.2, 0.0, 0.0};

double two_sigma_diff(double p, int seeds) {
    return 2.0 * std::sqrt(p * (1.0 - p) * 2.0 / (kBitsPerTrial * seeds));
}

DualPolWaveform data_waveform(size_t symbols, uint64_t seed) {
    DscmConfig cfg;
    return build_dscm(make_payload(cfg, symbols / 4, seed), cfg);
}

// --- criteria ---

void c1_mgpd_accuracy() {
    auto rows = run_scenario(build_preset("fig12"));
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.skew_est_ps - r.sweep_value));
    report(1, worst <= 0.1,
           fmt("skew sweep -30..+30 ps at OSNR 26: max error %.4f ps (target 0.1, hard 0.3)",
               worst));
}

void c2_mgpd_imbalance() {
    double worst = 0.0;
    ObtbConfig oc;
    oc.osnr_db = 26.0;
    uint64_t seed = 1;
    for (double iq : {-10.0, 0.0, 10.0})
        for (double ph : {-15.0, 0.0, 15.0})
            for (double amp : {-10.0, 0.0, 10.0}) {
                FrontEndImpairments imp;
                imp.tau_ryi = 5e-12;
                imp.tau_ryq = 5e-12 + iq * 1e-12;
                imp.tau_rxq = iq * 1e-12;
                imp.phase_imb_x_deg = imp.phase_imb_y_deg = ph;
                imp.amp_imb_x_db = imp.amp_imb_y_db = amp;
                oc.seed = seed++;
                auto est = run_obtb_calibration(imp, kCalRotation, oc);
                worst = std::max(worst, std::abs(est.tau_xy - 5e-12) * 1e12);
            }
    report(2, worst <= 0.2,
           fmt("tau 5 ps under IQ skew +-10 ps, phase +-15 deg, amp +-10 dB grid: "
               "max error %.4f ps (limit 0.2)",
               worst));
}

void c3_mgpd_osnr() {
    auto rows = run_scenario(build_preset("fig14"));
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.skew_est_ps - 5.0));
    report(3, worst <= 0.3,
           fmt("OSNR 12..26 dB with combined front-end impairments: max error %.4f ps "
               "(limit 0.3)",
               worst));
}

void c4_spt_tracking() {
    const std::vector<double> grid{21, 22, 23, 24, 25};
    auto base = with_sweep(build_preset("fig5"), grid);

    auto crossing_at = [&](double omega) {
        ScenarioConfig c = base;
        if (omega == 0.0)
            c.imp.rsop = RsopPdlParams{};  // no crosstalk at all
        else
            c.imp.rsop.omega = omega;
        return fec_crossing(seed_mean_ber(run_scenario(c)));
    };

    const double ref = crossing_at(0.0);
    bool pass = std::isfinite(ref);
    std::string detail = fmt("baseline crossing %.2f dB;", ref);
    for (double omega : {1e5, 1e6, 1e7}) {
        const double pen = crossing_at(omega) - ref;
        detail += fmt(" %.0e rad/s: %+.3f dB", omega, pen);
        pass = pass && std::isfinite(pen) && pen <= 0.5;
    }
    report(4, pass, "OSNR penalty vs no-crosstalk baseline (limit 0.5 dB): " + detail);
}

void c5_guard_band() {
    auto cfg = build_preset("fig8");
    cfg.seeds = {1, 2, 3};
    auto curve = seed_mean_ber(run_scenario(cfg));
    double lo = 1.0, hi = 0.0, mean = 0.0;
    for (auto& [g, p] : curve) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        mean += p / curve.size();
    }
    const double band = two_sigma_diff(mean, 3);
    report(5, hi - lo <= band,
           fmt("guard band 0..400 MHz: BER spread %.2e vs 2-sigma %.2e", hi - lo, band));
}

void c6_scheme_comparison() {
    auto base = build_preset("fig9");
    auto dpt = base;
    dpt.scheme = Scheme::Dpt;
    auto mimo = base;
    mimo.scheme = Scheme::MimoCmma;

    auto spt_curve = seed_mean_ber(run_scenario(base));
    auto dpt_curve = seed_mean_ber(run_scenario(dpt));
    auto mimo_curve = seed_mean_ber(run_scenario(mimo));

    bool pass = true;
    std::string detail;
    for (auto& [omega, p_spt] : spt_curve) {
        const double gap = std::abs(q_factor_db(p_spt) - q_factor_db(dpt_curve.at(omega)));
        detail += fmt(" %.0e: dq=%.2f dB;", omega, gap);
        pass = pass && gap <= 0.5;
    }
    const double m_slow = mimo_curve.at(1e4);
    const double m_1e6 = mimo_curve.at(1e6), m_1e7 = mimo_curve.at(1e7);
    detail += fmt(" MIMO ber @1e4=%.2e @1e6=%.2e @1e7=%.2e", m_slow, m_1e6, m_1e7);
    pass = pass && m_slow < 1e-2 && m_1e6 > 1e-2 && m_1e7 > 1e-2;
    report(6, pass, "SPT vs DPT parity and MIMO collapse:" + detail);
}

void c7_pdl() {
    auto slow = seed_mean_ber(run_scenario(build_preset("fig10")));
    auto fast_cfg = build_preset("fig10");
    fast_cfg.imp.rsop.omega = 1e7;
    auto fast = seed_mean_ber(run_scenario(fast_cfg));

    bool pass = true;
    std::string detail = "1 Mrad/s:";
    const double band_s = two_sigma_diff(slow.at(0.0), 2);
    for (auto& [pdl, p] : slow) {
        const double d = std::abs(p - slow.at(0.0));
        pass = pass && d <= band_s;
        detail += fmt(" %+.0f:%.1e", pdl, d);
    }
    detail += fmt(" (2s=%.1e); 10 Mrad/s inner:", band_s);
    const double band_f = two_sigma_diff(fast.at(0.0), 2);
    for (auto& [pdl, p] : fast) {
        const double d = std::abs(p - fast.at(0.0));
        if (std::abs(pdl) <= 2.0) {
            pass = pass && d <= band_f;
            detail += fmt(" %+.0f:%.1e", pdl, d);
        }
    }
    detail += fmt(" (2s=%.1e); 10 Mrad/s edge +-3 dB: %.1e/%.1e (allowed)", band_f,
                  std::abs(fast.at(-3.0) - fast.at(0.0)), std::abs(fast.at(3.0) - fast.at(0.0)));
    report(7, pass, "PDL flatness |BER(pdl)-BER(0)| vs 2-sigma: " + detail);
}

void c8_skew_damage() {
    auto base = build_preset("fig11");
    auto crossing_for = [&](double tau_ps, std::vector<double> grid) {
        auto c = with_sweep(base, std::move(grid));
        c = apply_override(c, "rx_xy_skew_ps", tau_ps);
        return fec_crossing(seed_mean_ber(run_scenario(c)));
    };
    const double x0 = crossing_for(0.0, {21, 22, 23, 24, 25});
    const double p1 = crossing_for(1.0, {21, 22, 23, 24, 25}) - x0;
    const double p15 = crossing_for(1.5, {22, 23, 24, 25, 26}) - x0;
    const double p2 = crossing_for(2.0, {24, 25, 26, 27, 28}) - x0;

    auto c3 = with_sweep(base, {24, 26, 28});
    c3 = apply_override(c3, "rx_xy_skew_ps", 3.0);
    double min_ber_3 = 1.0;
    for (auto& [o, p] : seed_mean_ber(run_scenario(c3))) min_ber_3 = std::min(min_ber_3, p);

    const bool monotone = std::isfinite(p1) && std::isfinite(p15) && std::isfinite(p2) &&
                          p1 < p15 && p15 < p2;
    const bool tau3_fails = min_ber_3 > kFec;
    const bool soft = std::abs(p1 - 0.5) <= 1.0 && std::abs(p15 - 1.2) <= 1.0 &&
                      std::abs(p2 - 3.2) <= 1.0;
    report(8, monotone && tau3_fails,
           fmt("penalties tau 1/1.5/2 ps: %.2f/%.2f/%.2f dB (targets 0.5/1.2/3.2 "
               "+-1 dB %s, loose); monotone %s; tau 3 ps floor BER %.2e stays above FEC %s",
               p1, p15, p2, soft ? "met" : "NOT met", monotone ? "yes" : "no", min_ber_3,
               tau3_fails ? "yes" : "no"));
}

void c9_closed_loop() {
    auto curve = seed_mean_ber(run_scenario(build_preset("fig15")));
    const double p0 = curve.at(0.0);
    double lo = 1.0, hi = 0.0;
    bool q_ok = true;
    for (auto& [tau, p] : curve) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        q_ok = q_ok && std::abs(q_factor_db(p) - q_factor_db(p0)) <= 0.3;
    }
    const double band = two_sigma_diff(p0, 2);
    report(9, hi - lo <= band && q_ok,
           fmt("compensated tau -3..+3 ps at 10 Mrad/s: BER spread %.2e vs 2-sigma %.2e, "
               "max |dq| vs tau=0 within 0.3 dB: %s",
               hi - lo, band, q_ok ? "yes" : "no"));
}

void c10_analytic_oracle() {
    DscmConfig dc;
    const double f1 = dc.subcarrier_spacing();
    ExtractorConfig ex;
    ex.lpf_bandwidth_hz = 25e6;
    ex.fir_taps = 8191;
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> ang(-kPi, kPi);

    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Jones2x2 j = rsop_matrix(ang(rng), ang(rng), ang(rng), 0.0);
        auto w = data_waveform(16384, 5000 + static_cast<uint64_t>(trial));
        PilotDescriptor p;
        p.f1 = f1;
        p.psr_db = -7.0;
        auto tx = insert_pilots(w, p);
        JonesTrajectory traj;
        traj.sample_rate = tx.sample_rate();
        traj.matrices.assign(tx.size(), j);
        auto ch = apply_polarization_channel(tx, traj);

        for (double tau_ps : {0.5, 1.0, 2.0, 3.0}) {
            FrontEndImpairments imp;
            imp.tau_ryi = imp.tau_ryq = tau_ps * 1e-12;
            auto rx = recombine(apply_rx_frontend(ch, imp));
            auto [px, py] = extract_pilot(rx, f1, ex);
            auto est = estimate_jones_spt(px, py);
            const auto& m = est.matrices[est.matrices.size() / 2];
            const auto want = predict_skewed_jones(j, tau_ps * 1e-12, f1);
            worst = std::max({worst, std::abs(m.xx - want.xx), std::abs(m.xy - want.xy),
                              std::abs(m.yx - want.yx), std::abs(m.yy - want.yy)});
        }
    }
    report(10, worst < 1e-2,
           fmt("50 random unitary channels x tau {0.5,1,2,3} ps: max element error %.2e "
               "vs analytic predictor (limit 1e-2)",
               worst));
}

void c11_structural() {
    bool pass = true;
    std::string detail;

    // SPT estimate structure: unit determinant and conjugate-pair layout
    {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        PilotTrace px, py;
        px.stride = py.stride = 1;
        px.sample_rate = py.sample_rate = 1e9;
        for (int k = 0; k < 64; ++k) {
            px.values.push_back({u(rng), u(rng)});
            py.values.push_back({u(rng), u(rng)});
        }
        for (const auto& m : estimate_jones_spt(px, py).matrices)
            worst = std::max({worst, std::abs(m.det() - 1.0), std::abs(m.yy - std::conj(m.xx)),
                              std::abs(m.xy + std::conj(m.yx))});
        pass = pass && worst < 1e-12;
        detail += fmt("SPT structure err %.1e;", worst);
    }

    // residual of inv(estimate)*J is diagonal for unitary channels
    {
        std::mt19937 rng(10);
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        double worst = 0.0;
        for (int k = 0; k < 32; ++k) {
            const Jones2x2 j = rsop_matrix(ang(rng), ang(rng), ang(rng), 0.0);
            const cplx rot = std::polar(1.0, ang(rng));
            PilotTrace px, py;
            px.stride = py.stride = 1;
            px.sample_rate = py.sample_rate = 1e9;
            px.values.assign(4, j.xx * rot);
            py.values.assign(4, j.yx * rot);
            const auto m = estimate_jones_spt(px, py).matrices[0].inverse();
            worst = std::max({worst, std::abs(m.xx * j.xy + m.xy * j.yy),
                              std::abs(m.yx * j.xx + m.yy * j.yx)});
        }
        pass = pass && worst < 1e-3;
        detail += fmt(" residual off-diagonal %.1e;", worst);
    }

    // noiseless impairment-free end to end: exactly zero errors
    {
        TrialConfig cfg;
        cfg.imp.link.fiber_km = 0.0;
        cfg.imp.link.linewidth_hz = 0.0;
        cfg.pilots.psr_db = -7.0;
        cfg.extractor.lpf_bandwidth_hz = 25e6;
        cfg.extractor.fir_taps = 8191;
        auto res = run_data_trial(cfg);
        pass = pass && res.ber.total_errors() == 0;
        detail += fmt(" noiseless e2e errors %zu;", res.ber.total_errors());
    }

    // tx-side XI delay cancels out of the skew estimate
    {
        ObtbConfig oc;
        double lo = 1e9, hi = -1e9;
        for (double txi : {-50e-12, 50e-12}) {
            FrontEndImpairments imp;
            imp.tau_ryi = imp.tau_ryq = 7e-12;
            imp.tau_txi = txi;
            auto est = run_obtb_calibration(imp, kCalRotation, oc);
            lo = std::min(lo, est.tau_xy);
            hi = std::max(hi, est.tau_xy);
        }
        pass = pass && (hi - lo) * 1e12 < 0.05;
        detail += fmt(" txi immunity %.3f ps;", (hi - lo) * 1e12);
    }

    // fractional delay composes on band-limited input
    {
        std::mt19937 rng(12);
        std::normal_distribution<double> nd;
        std::vector<cplx> v(4096);
        for (auto& s : v) s = {nd(rng), nd(rng)};
        auto spec = fft(v);
        for (size_t k = spec.size() * 2 / 5; k <= spec.size() * 3 / 5; ++k) spec[k] = 0.0;
        v = ifft(spec);
        const double fs = 1e9, t1 = 0.3e-9, t2 = 0.45e-9;
        auto once = fractional_delay(fractional_delay(v, t1, fs), t2, fs);
        auto both = fractional_delay(v, t1 + t2, fs);
        double worst = 0.0;
        for (size_t k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(once[k] - both[k]));
        pass = pass && worst < 1e-10;
        detail += fmt(" delay composition %.1e", worst);
    }

    report(11, pass, "structural suite: " + detail);
}

}  // namespace

int main() {
    c1_mgpd_accuracy();
    c2_mgpd_imbalance();
    c3_mgpd_osnr();
    c4_spt_tracking();
    c5_guard_band();
    c6_scheme_comparison();
    c7_pdl();
    c8_skew_damage();
    c9_closed_loop();
    c10_analytic_oracle();
    c11_structural();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    else std::printf("all criteria passed\n");
    return g_failures ? 1 : 0;
}
