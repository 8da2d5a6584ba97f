#include "dscm/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dscm {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kOsnrRefBandwidth = 12.5e9;
}  // namespace

double pdl_gamma(double pdl_db) {
    const double r = std::pow(10.0, pdl_db / 10.0);
    return (r - 1.0) / (r + 1.0);
}

Jones2x2 rsop_matrix(double alpha, double beta, double eta, double gamma) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    Jones2x2 r{ca * std::polar(1.0, beta), -sa * std::polar(1.0, eta),
               sa * std::polar(1.0, -eta), ca * std::polar(1.0, -beta)};
    if (gamma != 0.0) {
        // Signal traverses the PDL element first, then the rotation: R * diag(gp, gm).
        const double gp = std::sqrt(1.0 + gamma), gm = std::sqrt(1.0 - gamma);
        r.xx *= gp;
        r.yx *= gp;
        r.xy *= gm;
        r.yy *= gm;
    }
    return r;
}

JonesTrajectory jones_trajectory(const RsopPdlParams& p, size_t n, double fs) {
    if (n < 1) throw std::invalid_argument("jones_trajectory: need n >= 1");
    JonesTrajectory traj;
    traj.sample_rate = fs;
    traj.dgd = p.dgd;
    traj.matrices.resize(n);
    const double gamma = pdl_gamma(p.pdl_db);
    for (size_t k = 0; k < n; ++k) {
        const double d = p.omega * static_cast<double>(k) / fs;
        traj.matrices[k] = rsop_matrix(p.alpha0 + d, p.beta0 + d, p.eta0 + d, gamma);
    }
    return traj;
}

DualPolWaveform apply_polarization_channel(const DualPolWaveform& w, const JonesTrajectory& traj) {
    check_pair(w);
    if (traj.matrices.size() * traj.stride < w.size())
        throw std::invalid_argument("apply_polarization_channel: trajectory shorter than waveform");
    DualPolWaveform in = w;
    if (traj.dgd > 0.0) {
        // PMD factor diag(e^{j pi f tau}, e^{-j pi f tau}) acts on the input first.
        auto sx = fft(in.x.samples);
        auto sy = fft(in.y.samples);
        const size_t n = sx.size();
        for (size_t k = 0; k < n; ++k) {
            const double ph = std::numbers::pi * bin_freq(k, n, w.sample_rate()) * traj.dgd;
            sx[k] *= std::polar(1.0, ph);
            sy[k] *= std::polar(1.0, -ph);
        }
        in.x.samples = ifft(sx);
        in.y.samples = ifft(sy);
    }
    DualPolWaveform out = in;
    for (size_t k = 0; k < w.size(); ++k) {
        const Jones2x2& j = traj.matrices[k / traj.stride];
        const cplx ex = in.x.samples[k], ey = in.y.samples[k];
        out.x.samples[k] = j.xx * ex + j.xy * ey;
        out.y.samples[k] = j.yx * ex + j.yy * ey;
    }
    return out;
}

ComplexBlock apply_cd(const ComplexBlock& b, const LinkParams& link, int sign, double f_center) {
    if (link.fiber_km == 0.0 || b.size() == 0) return b;
    const double d_si = link.dispersion_ps_nm_km * 1e-6;  // s/m^2
    const double lambda = link.center_wavelength_nm * 1e-9;
    const double length = link.fiber_km * 1e3;
    const double coeff = std::numbers::pi * d_si * lambda * lambda * length / kSpeedOfLight;
    auto spec = fft(b.samples);
    const size_t n = spec.size();
    for (size_t k = 0; k < n; ++k) {
        const double f = bin_freq(k, n, b.sample_rate) + f_center;
        spec[k] *= std::polar(1.0, sign * coeff * f * f);
    }
    return {ifft(spec), b.sample_rate};
}

DualPolWaveform apply_cd(const DualPolWaveform& w, const LinkParams& link, int sign) {
    return {apply_cd(w.x, link, sign), apply_cd(w.y, link, sign)};
}

DualPolWaveform apply_laser(const DualPolWaveform& w, const LinkParams& link, uint64_t seed) {
    check_pair(w);
    const double combined_lw = 2.0 * link.linewidth_hz;
    if (link.freq_offset_hz == 0.0 && combined_lw == 0.0) return w;
    const double fs = w.sample_rate();
    const double sigma = std::sqrt(2.0 * std::numbers::pi * combined_lw / fs);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DualPolWaveform out = w;
    double phi = 0.0;
    const double wo = 2.0 * std::numbers::pi * link.freq_offset_hz / fs;
    for (size_t k = 0; k < w.size(); ++k) {
        if (combined_lw > 0.0) phi += sigma * gauss(rng);
        const cplx rot = std::polar(1.0, wo * static_cast<double>(k) + phi);
        out.x.samples[k] *= rot;
        out.y.samples[k] *= rot;
    }
    return out;
}

DualPolWaveform set_osnr(const DualPolWaveform& w, double osnr_db, uint64_t seed) {
    check_pair(w);
    if (std::isinf(osnr_db)) return w;
    if (!(osnr_db > 0.0)) throw std::invalid_argument("set_osnr: osnr_db must be > 0 or inf");
    const double fs = w.sample_rate();
    const double p_total = mean_power(w.x) + mean_power(w.y);
    const double noise_total = p_total / std::pow(10.0, osnr_db / 10.0) * (fs / kOsnrRefBandwidth);
    const double sigma = std::sqrt(noise_total / 2.0 / 2.0);  // per pol, per quadrature
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    const size_t n = w.size();
    std::vector<cplx> nx(n), ny(n);
    double px = 0.0, py = 0.0;
    for (size_t k = 0; k < n; ++k) {
        nx[k] = cplx(gauss(rng), gauss(rng));
        ny[k] = cplx(gauss(rng), gauss(rng));
        px += std::norm(nx[k]);
        py += std::norm(ny[k]);
    }
    // Rescale each polarization's noise block to the exact target power so the
    // realized OSNR carries no finite-block jitter between trials.
    const double target = noise_total / 2.0 * static_cast<double>(n);
    const double sx = px > 0.0 ? std::sqrt(target / px) : 1.0;
    const double sy = py > 0.0 ? std::sqrt(target / py) : 1.0;
    DualPolWaveform out = w;
    for (size_t k = 0; k < n; ++k) {
        out.x.samples[k] += sx * nx[k];
        out.y.samples[k] += sy * ny[k];
    }
    return out;
}

QuadTributaryCapture apply_rx_frontend(const DualPolWaveform& w, const FrontEndImpairments& imp) {
    check_pair(w);
    const double fs = w.sample_rate();
    const size_t n = w.size();
    QuadTributaryCapture q;
    q.sample_rate = fs;
    q.xi.resize(n);
    q.xq.resize(n);
    q.yi.resize(n);
    q.yq.resize(n);
    for (size_t k = 0; k < n; ++k) {
        q.xi[k] = w.x.samples[k].real();
        q.xq[k] = w.x.samples[k].imag();
        q.yi[k] = w.y.samples[k].real();
        q.yq[k] = w.y.samples[k].imag();
    }
    if (imp.tau_rxi != 0.0) q.xi = fractional_delay(q.xi, imp.tau_rxi, fs);
    if (imp.tau_rxq != 0.0) q.xq = fractional_delay(q.xq, imp.tau_rxq, fs);
    if (imp.tau_ryi != 0.0) q.yi = fractional_delay(q.yi, imp.tau_ryi, fs);
    if (imp.tau_ryq != 0.0) q.yq = fractional_delay(q.yq, imp.tau_ryq, fs);
    auto imbalance = [&](std::vector<double>& i_rail, std::vector<double>& q_rail, double amp_db,
                         double phase_deg) {
        if (amp_db == 0.0 && phase_deg == 0.0) return;
        const double g = std::pow(10.0, amp_db / 20.0);
        const double theta = phase_deg * std::numbers::pi / 180.0;
        const double c = std::cos(theta), s = std::sin(theta);
        for (size_t k = 0; k < i_rail.size(); ++k)
            q_rail[k] = g * (q_rail[k] * c - i_rail[k] * s);
    };
    imbalance(q.xi, q.xq, imp.amp_imb_x_db, imp.phase_imb_x_deg);
    imbalance(q.yi, q.yq, imp.amp_imb_y_db, imp.phase_imb_y_deg);
    return q;
}

DualPolWaveform apply_tx_xi_delay(const DualPolWaveform& w, double tau_txi) {
    if (tau_txi == 0.0) return w;
    check_pair(w);
    DualPolWaveform out = w;
    std::vector<double> xi(w.size());
    for (size_t k = 0; k < w.size(); ++k) xi[k] = w.x.samples[k].real();
    xi = fractional_delay(xi, tau_txi, w.sample_rate());
    for (size_t k = 0; k < w.size(); ++k)
        out.x.samples[k] = cplx(xi[k], w.x.samples[k].imag());
    return out;
}

DualPolWaveform recombine(const QuadTributaryCapture& q) {
    const size_t n = q.xi.size();
    if (q.xq.size() != n || q.yi.size() != n || q.yq.size() != n)
        throw std::invalid_argument("recombine: tributary length mismatch");
    DualPolWaveform w{{std::vector<cplx>(n), q.sample_rate}, {std::vector<cplx>(n), q.sample_rate}};
    for (size_t k = 0; k < n; ++k) {
        w.x.samples[k] = cplx(q.xi[k], q.xq[k]);
        w.y.samples[k] = cplx(q.yi[k], q.yq[k]);
    }
    return w;
}

}  // namespace dscm
