#include "dscm/polaris.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dscm {

namespace {

// windowed-sinc low-pass, Hamming window, odd length, unit DC gain
std::vector<double> lowpass_taps(double cutoff_hz, double fs, int ntaps) {
    if (ntaps % 2 == 0) ++ntaps;
    std::vector<double> taps(ntaps);
    const double fc = cutoff_hz / fs;
    const int mid = ntaps / 2;
    for (int i = 0; i < ntaps; ++i) {
        const int k = i - mid;
        const double x = 2.0 * std::numbers::pi * fc * k;
        double s = (k == 0) ? 2.0 * fc : std::sin(x) / (std::numbers::pi * k);
        const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (ntaps - 1));
        taps[i] = s * w;
    }
    double sum = 0.0;
    for (double t : taps) sum += t;
    for (double& t : taps) t /= sum;
    return taps;
}

std::vector<cplx> lowpass(const std::vector<cplx>& in, double fs, const ExtractorConfig& cfg) {
    switch (cfg.lpf_kind) {
        case LpfKind::Fir:
            return filter_same(in, lowpass_taps(cfg.lpf_bandwidth_hz, fs, cfg.fir_taps));
        case LpfKind::MovingAverage: {
            int len = std::max<int>(1, static_cast<int>(std::round(fs / (2.0 * cfg.lpf_bandwidth_hz))));
            if (len % 2 == 0) ++len;
            std::vector<double> taps(len, 1.0 / len);
            return filter_same(in, taps);
        }
        case LpfKind::SinglePole: {
            const double a = std::exp(-2.0 * std::numbers::pi * cfg.lpf_bandwidth_hz / fs);
            std::vector<cplx> out(in.size());
            cplx state = in.empty() ? cplx{} : in[0];
            for (size_t k = 0; k < in.size(); ++k) {
                state = a * state + (1.0 - a) * in[k];
                out[k] = state;
            }
            // compensate the DC group delay a/(1-a) samples
            const size_t gd = static_cast<size_t>(std::round(a / (1.0 - a)));
            std::vector<cplx> shifted(in.size());
            for (size_t k = 0; k < in.size(); ++k)
                shifted[k] = out[std::min(in.size() - 1, k + gd)];
            return shifted;
        }
    }
    throw std::logic_error("lowpass: unknown kind");
}

}  // namespace

double estimate_frequency_offset(const DualPolWaveform& w, double expected_f1,
                                 double search_span) {
    check_pair(w);
    const double fs = w.sample_rate();
    const size_t n = w.size();
    auto spec = fft(w.x.samples);
    std::vector<double> psd(n);
    for (size_t k = 0; k < n; ++k) psd[k] = std::norm(spec[k]);

    // detect on a 9-bin moving average: raw periodogram bins of a modulated
    // signal are exponential, so a lone raw bin can clear any fixed threshold
    std::vector<double> smooth(n);
    {
        const long long hw = 4, nn = static_cast<long long>(n);
        for (size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (long long d = -hw; d <= hw; ++d)
                s += psd[static_cast<size_t>((static_cast<long long>(k) + d + nn) % nn)];
            smooth[k] = s / static_cast<double>(2 * hw + 1);
        }
    }

    std::vector<size_t> window;
    for (size_t k = 0; k < n; ++k) {
        const double f = bin_freq(k, n, fs);
        if (std::abs(f - expected_f1) <= search_span) window.push_back(k);
    }
    if (window.empty()) throw std::invalid_argument("estimate_frequency_offset: empty search window");

    size_t speak = window[0];
    std::vector<double> vals;
    vals.reserve(window.size());
    for (size_t k : window) {
        vals.push_back(smooth[k]);
        if (smooth[k] > smooth[speak]) speak = k;
    }
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    const double median = vals[vals.size() / 2];
    if (smooth[speak] < 10.0 * median || smooth[speak] <= 0.0)
        throw std::runtime_error("estimate_frequency_offset: pilot not found");

    // refine on the raw periodogram near the smoothed peak
    size_t peak = speak;
    for (long long d = -4; d <= 4; ++d) {
        const size_t k = static_cast<size_t>(
            (static_cast<long long>(speak) + d + static_cast<long long>(n)) % static_cast<long long>(n));
        if (psd[k] > psd[peak]) peak = k;
    }

    // quadratic interpolation on log power around the peak
    const size_t km = (peak + n - 1) % n, kp = (peak + 1) % n;
    const double lm = std::log(std::max(psd[km], 1e-300));
    const double l0 = std::log(psd[peak]);
    const double lp = std::log(std::max(psd[kp], 1e-300));
    double delta = 0.0;
    const double den = lm - 2.0 * l0 + lp;
    if (std::abs(den) > 1e-30) delta = 0.5 * (lm - lp) / den;
    delta = std::clamp(delta, -0.5, 0.5);
    const double f_peak = bin_freq(peak, n, fs) + delta * fs / static_cast<double>(n);
    return f_peak - expected_f1;
}

std::pair<PilotTrace, PilotTrace> extract_pilot(const DualPolWaveform& w, double f,
                                                const ExtractorConfig& cfg) {
    check_pair(w);
    const double fs = w.sample_rate();
    const size_t n = w.size();
    std::vector<cplx> bx(n), by(n);
    const double ph = -2.0 * std::numbers::pi * f / fs;
    for (size_t k = 0; k < n; ++k) {
        const cplx rot = std::polar(1.0, ph * static_cast<double>(k));
        bx[k] = w.x.samples[k] * rot;
        by[k] = w.y.samples[k] * rot;
    }
    bx = lowpass(bx, fs, cfg);
    by = lowpass(by, fs, cfg);
    const size_t d = std::max<size_t>(1, cfg.decimation);
    PilotTrace tx, ty;
    tx.pilot_freq = ty.pilot_freq = f;
    tx.stride = ty.stride = d;
    tx.sample_rate = ty.sample_rate = fs / static_cast<double>(d);
    for (size_t k = 0; k < n; k += d) {
        tx.values.push_back(bx[k]);
        ty.values.push_back(by[k]);
    }
    return {tx, ty};
}

JonesTrajectory estimate_jones_dpt(const PilotTrace& px1, const PilotTrace& py1,
                                   const PilotTrace& px2, const PilotTrace& py2) {
    const size_t n = px1.values.size();
    if (py1.values.size() != n || px2.values.size() != n || py2.values.size() != n)
        throw std::invalid_argument("estimate_jones_dpt: traces on different time bases");
    JonesTrajectory traj;
    traj.sample_rate = px1.sample_rate;
    traj.stride = px1.stride;
    traj.matrices.resize(n);
    traj.degenerate.assign(n, 0);
    for (size_t k = 0; k < n; ++k) {
        cplx a = px1.values[k], c = py1.values[k];
        cplx b = px2.values[k], d = py2.values[k];
        const double n1 = std::sqrt(std::norm(a) + std::norm(c));
        const double n2 = std::sqrt(std::norm(b) + std::norm(d));
        if (n1 > 0.0) { a /= n1; c /= n1; }
        if (n2 > 0.0) { b /= n2; d /= n2; }
        traj.matrices[k] = {a, b, c, d};
        if (std::abs(traj.matrices[k].det()) < 1e-3 || n1 == 0.0 || n2 == 0.0)
            traj.degenerate[k] = 1;
    }
    return traj;
}

JonesTrajectory estimate_jones_spt(const PilotTrace& px1, const PilotTrace& py1) {
    const size_t n = px1.values.size();
    if (py1.values.size() != n)
        throw std::invalid_argument("estimate_jones_spt: traces on different time bases");
    JonesTrajectory traj;
    traj.sample_rate = px1.sample_rate;
    traj.stride = px1.stride;
    traj.matrices.resize(n);
    traj.degenerate.assign(n, 0);
    for (size_t k = 0; k < n; ++k) {
        const cplx p = px1.values[k], q = py1.values[k];
        const double norm2 = std::norm(p) + std::norm(q);
        if (norm2 < 1e-30) {  // pilot lost
            traj.matrices[k] = {};
            traj.degenerate[k] = 1;
            continue;
        }
        const double s = 1.0 / std::sqrt(norm2);
        traj.matrices[k] = {p * s, -std::conj(q) * s, q * s, std::conj(p) * s};
    }
    return traj;
}

DualPolWaveform apply_inverse_jones(const DualPolWaveform& w, const JonesTrajectory& traj) {
    check_pair(w);
    if (traj.matrices.empty()) throw std::invalid_argument("apply_inverse_jones: empty trajectory");
    const size_t n = w.size();
    const size_t m = traj.matrices.size();
    const double stride = static_cast<double>(traj.stride);

    // precompute inverses with hold-over for degenerate samples
    std::vector<Jones2x2> inv(m);
    Jones2x2 last{};  // identity
    for (size_t k = 0; k < m; ++k) {
        const bool bad = (!traj.degenerate.empty() && traj.degenerate[k]) ||
                         std::abs(traj.matrices[k].det()) < 1e-12;
        if (!bad) last = traj.matrices[k].inverse();
        inv[k] = last;
    }

    DualPolWaveform out = w;
    for (size_t k = 0; k < n; ++k) {
        Jones2x2 j;
        if (traj.stride == 1) {
            j = inv[std::min(k, m - 1)];
        } else {
            const double pos = static_cast<double>(k) / stride;
            const size_t i0 = std::min(static_cast<size_t>(pos), m - 1);
            const size_t i1 = std::min(i0 + 1, m - 1);
            const double t = pos - static_cast<double>(i0);
            const Jones2x2 &a = inv[i0], &b = inv[i1];
            j = {a.xx + t * (b.xx - a.xx), a.xy + t * (b.xy - a.xy),
                 a.yx + t * (b.yx - a.yx), a.yy + t * (b.yy - a.yy)};
        }
        const cplx rx = w.x.samples[k], ry = w.y.samples[k];
        out.x.samples[k] = j.xx * rx + j.xy * ry;
        out.y.samples[k] = j.yx * rx + j.yy * ry;
    }
    return out;
}

Jones2x2 predict_skewed_jones(const Jones2x2& j, double tau_xy, double f1,
                              std::optional<double> f2) {
    if (f2.has_value()) {
        // DPT: the bottom row picks up the per-column skew phase.
        Jones2x2 m = j;
        m.yx *= std::polar(1.0, -2.0 * std::numbers::pi * f1 * tau_xy);
        m.yy *= std::polar(1.0, -2.0 * std::numbers::pi * (*f2) * tau_xy);
        return m;
    }
    // SPT: built from the corrupted f1 column and its conjugates.
    const cplx d = std::polar(1.0, -2.0 * std::numbers::pi * f1 * tau_xy);
    return {j.xx, -std::conj(j.yx * d), j.yx * d, std::conj(j.xx)};
}

}  // namespace dscm
