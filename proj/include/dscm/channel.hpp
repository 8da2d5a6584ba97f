#ifndef DSCM_CHANNEL_HPP
#define DSCM_CHANNEL_HPP

#include <cstdint>
#include <limits>

#include "dscm/signal.hpp"

// Fiber and transceiver impairments: time-varying RSOP/PDL Jones channel,
// chromatic dispersion, laser frequency offset and phase noise, OSNR
// loading, and the four-tributary receiver front end.

namespace dscm {

struct Jones2x2 {
    cplx xx{1.0, 0.0}, xy{0.0, 0.0}, yx{0.0, 0.0}, yy{1.0, 0.0};

    cplx det() const { return xx * yy - xy * yx; }
    Jones2x2 inverse() const {
        const cplx d = det();
        return {yy / d, -xy / d, -yx / d, xx / d};
    }
};

struct RsopPdlParams {
    double pdl_db = 0.0;   // PDL magnitude, 10*log10((1+gamma)/(1-gamma))
    double alpha0 = 0.0;   // initial rotation angles, radians
    double beta0 = 0.0;
    double eta0 = 0.0;
    double omega = 0.0;    // RSOP speed, rad/s
    double dgd = 0.0;      // DGD, seconds (default off)
};

struct LinkParams {
    double fiber_km = 80.0;
    double dispersion_ps_nm_km = 17.0;
    double center_wavelength_nm = 1550.0;
    double linewidth_hz = 100e3;  // per laser; Tx + LO combine
    double freq_offset_hz = 0.0;
    double osnr_db = std::numeric_limits<double>::infinity();  // 12.5 GHz, both pols
};

struct FrontEndImpairments {
    double tau_rxi = 0.0, tau_rxq = 0.0, tau_ryi = 0.0, tau_ryq = 0.0;  // seconds
    double tau_txi = 0.0;  // Tx X-polarization I-tributary delay
    double amp_imb_x_db = 0.0, amp_imb_y_db = 0.0;
    double phase_imb_x_deg = 0.0, phase_imb_y_deg = 0.0;

    double rx_xy_skew() const { return tau_ryi - tau_rxi; }
};

struct JonesTrajectory {
    std::vector<Jones2x2> matrices;
    double sample_rate = 0.0;
    size_t stride = 1;  // waveform samples per trajectory entry
    double dgd = 0.0;   // PMD factor, applied in frequency domain when > 0
    std::vector<uint8_t> degenerate;  // per-entry flags (estimators only)
};

// PDL magnitude gamma from the dB figure.
double pdl_gamma(double pdl_db);

Jones2x2 rsop_matrix(double alpha, double beta, double eta, double gamma);

JonesTrajectory jones_trajectory(const RsopPdlParams& p, size_t n, double fs);

// Per-sample [Rx;Ry] = J(k) [Ex;Ey]; PMD factor first when dgd > 0.
DualPolWaveform apply_polarization_channel(const DualPolWaveform& w, const JonesTrajectory& traj);

// Frequency-domain all-pass exp(sign*j*pi*D*lambda^2*L/c*(f+f_center)^2).
ComplexBlock apply_cd(const ComplexBlock& b, const LinkParams& link, int sign,
                      double f_center = 0.0);
DualPolWaveform apply_cd(const DualPolWaveform& w, const LinkParams& link, int sign);

// Frequency offset plus Wiener phase noise with combined Tx+LO linewidth.
DualPolWaveform apply_laser(const DualPolWaveform& w, const LinkParams& link, uint64_t seed);

// Circular complex AWGN; noise power referenced to 12.5 GHz both-pol
// bandwidth, split equally between polarizations.
DualPolWaveform set_osnr(const DualPolWaveform& w, double osnr_db, uint64_t seed);

// Split to I/Q rails, apply per-tributary delays, then IQ imbalance
// (Q' = g*(Q*cos(theta) - I*sin(theta))). tau_txi is a transmit-side
// effect; apply it with apply_tx_xi_delay before the channel.
QuadTributaryCapture apply_rx_frontend(const DualPolWaveform& w, const FrontEndImpairments& imp);

DualPolWaveform apply_tx_xi_delay(const DualPolWaveform& w, double tau_txi);

DualPolWaveform recombine(const QuadTributaryCapture& q);

}  // namespace dscm

#endif
