#include "dscm/mgpd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dscm/txdsp.hpp"

namespace dscm {

namespace {

constexpr double kToneThresholdDb = 20.0;

struct ToneReadout {
    double angle;   // angle(P+ * conj(P-))
    double snr_db;  // tone bin power over median bin power
};

ToneReadout tone_readout(const std::vector<double>& rail, size_t bin) {
    std::vector<cplx> c(rail.begin(), rail.end());
    auto spec = fft(c);
    const size_t n = spec.size();
    const cplx pos = spec[bin];
    const cplx neg = spec[n - bin];
    std::vector<double> mags(n);
    for (size_t k = 0; k < n; ++k) mags[k] = std::norm(spec[k]);
    std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
    const double median = std::max(mags[n / 2], 1e-300);
    const double tone = std::max(std::norm(pos), std::norm(neg));
    return {std::arg(pos * std::conj(neg)), 10.0 * std::log10(tone / median)};
}

double wrap_pi(double a) {
    while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    return a;
}

}  // namespace

std::string SkewEstimate::to_json() const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"tau_xy_ps\": " << tau_xy * 1e12 << ", \"angle_x\": " << angle_x
       << ", \"angle_y\": " << angle_y << ", \"tone_snr_x_db\": " << tone_snr_x_db
       << ", \"tone_snr_y_db\": " << tone_snr_y_db
       << ", \"unambiguous_range_ps\": " << unambiguous_range * 1e12 << "}";
    return os.str();
}

SkewEstimate estimate_rx_xy_skew(const QuadTributaryCapture& capture, double f1) {
    const size_t n = capture.xi.size();
    if (n == 0) throw std::invalid_argument("estimate_rx_xy_skew: empty capture");
    if (f1 <= 0.0) throw std::invalid_argument("estimate_rx_xy_skew: f1 must be > 0");
    const double bin_exact = f1 * static_cast<double>(n) / capture.sample_rate;
    const double bin_round = std::round(bin_exact);
    if (std::abs(bin_exact - bin_round) > 1e-6)
        throw std::invalid_argument("estimate_rx_xy_skew: f1 not FFT-bin aligned");
    const size_t bin = static_cast<size_t>(bin_round);
    if (bin == 0 || bin >= n / 2)
        throw std::invalid_argument("estimate_rx_xy_skew: f1 outside (0, Nyquist)");

    const auto rx = tone_readout(capture.xi, bin);
    const auto ry = tone_readout(capture.yi, bin);
    if (rx.snr_db < kToneThresholdDb || ry.snr_db < kToneThresholdDb)
        throw std::runtime_error("estimate_rx_xy_skew: insufficient polarization crosstalk");

    SkewEstimate est;
    est.angle_x = rx.angle;
    est.angle_y = ry.angle;
    est.tone_snr_x_db = rx.snr_db;
    est.tone_snr_y_db = ry.snr_db;
    est.unambiguous_range = 1.0 / (4.0 * f1);
    est.tau_xy = wrap_pi(rx.angle - ry.angle) / (4.0 * std::numbers::pi * f1);
    return est;
}

QuadTributaryCapture compensate_rx_xy_skew(const QuadTributaryCapture& capture,
                                           const SkewEstimate& est) {
    if (est.tau_xy == 0.0) return capture;
    QuadTributaryCapture out = capture;
    out.yi = fractional_delay(capture.yi, -est.tau_xy, capture.sample_rate);
    out.yq = fractional_delay(capture.yq, -est.tau_xy, capture.sample_rate);
    return out;
}

SkewEstimate run_obtb_calibration(const FrontEndImpairments& imp, const RsopPdlParams& rotation,
                                  const ObtbConfig& cfg) {
    const double duration = static_cast<double>(cfg.num_samples) / cfg.sample_rate;
    auto w = generate_mgpd_training(cfg.f1, duration, cfg.sample_rate);
    w = apply_tx_xi_delay(w, imp.tau_txi);
    RsopPdlParams static_rot = rotation;
    static_rot.omega = 0.0;  // calibration uses a static rotation
    auto traj = jones_trajectory(static_rot, 1, cfg.sample_rate);
    traj.stride = cfg.num_samples;
    w = apply_polarization_channel(w, traj);
    w = set_osnr(w, cfg.osnr_db, cfg.seed);
    const auto capture = apply_rx_frontend(w, imp);
    return estimate_rx_xy_skew(capture, cfg.f1);
}

}  // namespace dscm
