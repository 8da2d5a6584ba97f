#include "dscm/rxdsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dscm {

namespace {

double erfc_inv(double y) {
    if (y <= 0.0 || y >= 2.0) throw std::invalid_argument("erfc_inv: argument outside (0,2)");
    // bisection + Newton on std::erfc
    double lo = -6.0, hi = 6.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > y) lo = mid; else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double f = std::erfc(x) - y;
        const double df = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x);
        x -= f / df;
    }
    return x;
}

}  // namespace

double q_factor_db(double ber) {
    if (ber <= 0.0) return std::numeric_limits<double>::infinity();
    if (ber >= 0.5) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(std::numbers::sqrt2 * erfc_inv(2.0 * ber));
}

size_t BerReport::total_errors() const {
    size_t e = 0;
    for (const auto& pol : cells)
        for (const auto& c : pol) e += c.bit_errors;
    return e;
}

size_t BerReport::total_bits() const {
    size_t b = 0;
    for (const auto& pol : cells)
        for (const auto& c : pol) b += c.bits_counted;
    return b;
}

double BerReport::aggregate_ber() const {
    const size_t b = total_bits();
    return b ? static_cast<double>(total_errors()) / static_cast<double>(b) : 0.0;
}

double BerReport::q_db() const { return q_factor_db(aggregate_ber()); }

std::array<std::vector<ComplexBlock>, 2> demux_subcarriers(const DualPolWaveform& w,
                                                           const DscmConfig& cfg) {
    check_pair(w);
    std::array<std::vector<ComplexBlock>, 2> out;
    const double target_rate = 2.0 * cfg.subcarrier_baud();
    for (int pol = 0; pol < 2; ++pol) {
        const ComplexBlock& src = (pol == 0) ? w.x : w.y;
        for (int sc = 0; sc < cfg.num_subcarriers; ++sc) {
            auto base = frequency_shift(src, -cfg.subcarrier_center(sc));
            auto rs = resample(base, target_rate);
            out[pol].push_back(rrc_matched_filter(rs, cfg.rolloff, 2));
        }
    }
    return out;
}

SyncResult synchronize(const std::vector<cplx>& rx_symbols, const std::vector<cplx>& ref_symbols) {
    if (rx_symbols.empty() || ref_symbols.empty())
        throw std::invalid_argument("synchronize: empty input");
    const size_t n = std::max(rx_symbols.size(), ref_symbols.size());
    std::vector<cplx> a(n, 0.0), b(n, 0.0);
    double ma = 0.0, mb = 0.0;
    for (const auto& v : rx_symbols) ma += std::abs(v);
    for (const auto& v : ref_symbols) mb += std::abs(v);
    ma /= rx_symbols.size();
    mb /= ref_symbols.size();
    for (size_t i = 0; i < rx_symbols.size(); ++i) a[i] = std::abs(rx_symbols[i]) - ma;
    for (size_t i = 0; i < ref_symbols.size(); ++i) b[i] = std::abs(ref_symbols[i]) - mb;
    auto fa = fft(a);
    auto fb = fft(b);
    for (size_t k = 0; k < n; ++k) fa[k] *= std::conj(fb[k]);
    auto corr = ifft(fa);
    std::vector<double> mag(n);
    for (size_t k = 0; k < n; ++k) mag[k] = std::abs(corr[k]);
    const size_t peak = static_cast<size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
    // noise floor: RMS of the correlation away from the peak
    double sum2 = 0.0;
    size_t cnt = 0;
    for (size_t k = 0; k < n; ++k) {
        if ((k + n - peak) % n <= 2 || (peak + n - k) % n <= 2) continue;
        sum2 += mag[k] * mag[k];
        ++cnt;
    }
    const double floor = cnt ? std::sqrt(sum2 / cnt) : 0.0;
    if (mag[peak] < 5.0 * floor) throw std::runtime_error("synchronize: sync failed");

    long lag = static_cast<long>(peak);
    if (lag > static_cast<long>(n) / 2) lag -= static_cast<long>(n);

    SyncResult res;
    res.lag = lag;
    const long ref_start = std::max<long>(0, -lag);
    const long rx_start = ref_start + lag;
    const long overlap = std::min<long>(static_cast<long>(ref_symbols.size()) - ref_start,
                                        static_cast<long>(rx_symbols.size()) - rx_start);
    if (overlap <= 0) throw std::runtime_error("synchronize: sync failed (no overlap)");
    res.rx.assign(rx_symbols.begin() + rx_start, rx_symbols.begin() + rx_start + overlap);
    res.ref.assign(ref_symbols.begin() + ref_start, ref_symbols.begin() + ref_start + overlap);
    return res;
}

namespace {

double nearest_radius_sq(double mod2, const std::array<double, 3>& radii) {
    double best = radii[0] * radii[0], dist = std::abs(mod2 - best);
    for (double r : radii) {
        const double r2 = r * r;
        const double d = std::abs(mod2 - r2);
        if (d < dist) { dist = d; best = r2; }
    }
    return best;
}

}  // namespace

std::vector<cplx> equalize_siso_cmma(const std::vector<cplx>& in_raw, const EqualizerConfig& cfg) {
    const int t = cfg.taps;
    if (t < 1 || t % 2 == 0) throw std::invalid_argument("equalize_siso_cmma: taps must be odd");
    if (in_raw.size() < static_cast<size_t>(2 * t)) return {};
    // AGC: the update is sensitive to input scale, so bring the stream to unit power first.
    double pin = 0.0;
    for (const auto& v : in_raw) pin += std::norm(v);
    pin /= static_cast<double>(in_raw.size());
    std::vector<cplx> in(in_raw);
    if (pin > 0.0) {
        const double g = 1.0 / std::sqrt(pin);
        for (auto& v : in) v *= g;
    }
    std::vector<cplx> w(t, 0.0);
    w[t / 2] = 1.0;
    const double init_norm = 1.0;
    const size_t nout = (in.size() - t) / 2 + 1;

    auto step = [&](size_t k, double mu, bool cmma) {
        const cplx* x = in.data() + 2 * k;
        cplx y = 0.0;
        for (int i = 0; i < t; ++i) y += w[i] * x[i];
        const double mod2 = std::norm(y);
        const double target = cmma ? nearest_radius_sq(mod2, cfg.radii) : cfg.cma_r2;
        const cplx e = y * (target - mod2);
        for (int i = 0; i < t; ++i) w[i] += mu * e * std::conj(x[i]);
        return y;
    };

    const size_t pretrain = std::min(cfg.cma_pretrain_symbols, nout);
    for (size_t k = 0; k < pretrain; ++k) step(k, cfg.mu_cma, false);

    std::vector<cplx> out(nout);
    for (size_t k = 0; k < nout; ++k) {
        out[k] = step(k, cfg.mu_cmma, true);
        if (k % 1024 == 0) {
            double n2 = 0.0;
            for (const auto& v : w) n2 += std::norm(v);
            // negated comparison so a NaN tap norm also counts as divergence
            if (!(n2 <= 1e4 * init_norm)) throw std::runtime_error("equalizer diverged");
        }
    }
    return out;
}

MimoResult equalize_mimo_cmma(const std::vector<cplx>& x_raw, const std::vector<cplx>& y_raw,
                              const EqualizerConfig& cfg) {
    if (x_raw.size() != y_raw.size())
        throw std::invalid_argument("equalize_mimo_cmma: length mismatch");
    const int t = cfg.taps;
    if (t < 1 || t % 2 == 0) throw std::invalid_argument("equalize_mimo_cmma: taps must be odd");
    if (x_raw.size() < static_cast<size_t>(2 * t)) return {};
    // Joint AGC: one gain for both inputs so the polarization mixing is preserved.
    double pin = 0.0;
    for (const auto& v : x_raw) pin += std::norm(v);
    for (const auto& v : y_raw) pin += std::norm(v);
    pin /= static_cast<double>(2 * x_raw.size());
    std::vector<cplx> x(x_raw), y(y_raw);
    if (pin > 0.0) {
        const double g = 1.0 / std::sqrt(pin);
        for (auto& v : x) v *= g;
        for (auto& v : y) v *= g;
    }
    std::vector<cplx> wxx(t, 0.0), wxy(t, 0.0), wyx(t, 0.0), wyy(t, 0.0);
    wxx[t / 2] = 1.0;
    wyy[t / 2] = 1.0;  // orthogonal start avoids the same-source solution
    const size_t nout = (x.size() - t) / 2 + 1;

    auto step = [&](size_t k, double mu, bool cmma, cplx& ox, cplx& oy) {
        const cplx* ux = x.data() + 2 * k;
        const cplx* uy = y.data() + 2 * k;
        cplx yx = 0.0, yy = 0.0;
        for (int i = 0; i < t; ++i) {
            yx += wxx[i] * ux[i] + wxy[i] * uy[i];
            yy += wyx[i] * ux[i] + wyy[i] * uy[i];
        }
        const double mx = std::norm(yx), my = std::norm(yy);
        const double tx = cmma ? nearest_radius_sq(mx, cfg.radii) : cfg.cma_r2;
        const double ty = cmma ? nearest_radius_sq(my, cfg.radii) : cfg.cma_r2;
        const cplx ex = yx * (tx - mx), ey = yy * (ty - my);
        for (int i = 0; i < t; ++i) {
            wxx[i] += mu * ex * std::conj(ux[i]);
            wxy[i] += mu * ex * std::conj(uy[i]);
            wyx[i] += mu * ey * std::conj(ux[i]);
            wyy[i] += mu * ey * std::conj(uy[i]);
        }
        ox = yx;
        oy = yy;
    };

    cplx ox, oy;
    const size_t pretrain = std::min(cfg.cma_pretrain_symbols, nout);
    for (size_t k = 0; k < pretrain; ++k) step(k, cfg.mu_cma, false, ox, oy);

    // Re-seed the Y row orthogonal to the converged X row; with a strong
    // static mix both rows otherwise slide onto the same polarization.
    for (int i = 0; i < t; ++i) {
        wyx[i] = -std::conj(wxy[t - 1 - i]);
        wyy[i] = std::conj(wxx[t - 1 - i]);
    }
    for (size_t k = 0; k < pretrain; ++k) step(k, cfg.mu_cma, false, ox, oy);

    MimoResult res;
    res.x.resize(nout);
    res.y.resize(nout);
    for (size_t k = 0; k < nout; ++k) step(k, cfg.mu_cmma, true, res.x[k], res.y[k]);

    cplx cross = 0.0;
    double px = 0.0, py = 0.0;
    for (size_t k = nout / 2; k < nout; ++k) {
        cross += res.x[k] * std::conj(res.y[k]);
        px += std::norm(res.x[k]);
        py += std::norm(res.y[k]);
    }
    if (px > 0.0 && py > 0.0 && std::abs(cross) / std::sqrt(px * py) > 0.9) res.singular = true;
    return res;
}

std::vector<cplx> bps_carrier_recovery(const std::vector<cplx>& symbols, int num_test_phases,
                                       size_t block) {
    const size_t n = symbols.size();
    if (n == 0) return {};
    // Sliding-window search: per-phase decision distances, box-filtered via
    // prefix sums, then a per-symbol argmin with pi/2 branch unwrapping.
    std::vector<std::vector<double>> prefix(num_test_phases, std::vector<double>(n + 1, 0.0));
    std::vector<double> phases(num_test_phases);
    for (int p = 0; p < num_test_phases; ++p) {
        phases[p] = -std::numbers::pi / 4.0 + (std::numbers::pi / 2.0) * p / num_test_phases;
        const cplx rot = std::polar(1.0, phases[p]);
        double acc = 0.0;
        for (size_t k = 0; k < n; ++k) {
            const cplx s = symbols[k] * rot;
            acc += std::norm(s - slice_16qam(s));
            prefix[p][k + 1] = acc;
        }
    }
    const size_t half = std::max<size_t>(1, block / 2);
    std::vector<cplx> out(n);
    double prev_total = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const size_t lo = k > half ? k - half : 0;
        const size_t hi = std::min(n, k + half + 1);
        int best_p = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int p = 0; p < num_test_phases; ++p) {
            const double cost = prefix[p][hi] - prefix[p][lo];
            if (cost < best_cost) { best_cost = cost; best_p = p; }
        }
        double total = phases[best_p];
        if (k > 0) {
            while (total - prev_total > std::numbers::pi / 4.0) total -= std::numbers::pi / 2.0;
            while (total - prev_total < -std::numbers::pi / 4.0) total += std::numbers::pi / 2.0;
        }
        prev_total = total;
        out[k] = symbols[k] * std::polar(1.0, total);
    }
    return out;
}

std::vector<cplx> resolve_quadrant(const std::vector<cplx>& rx, const std::vector<cplx>& ref) {
    const size_t n = std::min({rx.size(), ref.size(), static_cast<size_t>(4096)});
    int best_k = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        const cplx rot = std::polar(1.0, k * std::numbers::pi / 2.0);
        double cost = 0.0;
        for (size_t i = 0; i < n; ++i) cost += std::norm(rx[i] * rot - ref[i]);
        if (cost < best_cost) { best_cost = cost; best_k = k; }
    }
    std::vector<cplx> out(rx.size());
    const cplx rot = std::polar(1.0, best_k * std::numbers::pi / 2.0);
    for (size_t i = 0; i < rx.size(); ++i) out[i] = rx[i] * rot;
    return out;
}

BerCell count_bit_errors(const std::vector<uint8_t>& decided, const std::vector<uint8_t>& ref) {
    const size_t n = std::min(decided.size(), ref.size());
    BerCell c;
    c.bits_counted = n;
    for (size_t i = 0; i < n; ++i)
        if (decided[i] != ref[i]) ++c.bit_errors;
    return c;
}

}  // namespace dscm
