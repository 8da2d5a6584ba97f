#include "dscm/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace dscm {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<cplx> transform(const std::vector<cplx>& in, int sign) {
    const size_t n = in.size();
    std::vector<cplx> out(n);
    if (n == 0) return out;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                                reinterpret_cast<fftw_complex*>(out.data()), sign,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (sign == FFTW_BACKWARD) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : out) v *= scale;
    }
    return out;
}

}  // namespace

void check_finite(const ComplexBlock& b, const char* what) {
    if (b.sample_rate <= 0.0) throw std::invalid_argument(std::string(what) + ": sample_rate must be > 0");
    for (const auto& v : b.samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

void check_pair(const DualPolWaveform& w) {
    if (w.x.size() != w.y.size()) throw std::invalid_argument("dual-pol waveform: length mismatch");
    if (w.x.sample_rate != w.y.sample_rate)
        throw std::invalid_argument("dual-pol waveform: sample_rate mismatch");
}

std::vector<cplx> fft(const std::vector<cplx>& in) { return transform(in, FFTW_FORWARD); }
std::vector<cplx> ifft(const std::vector<cplx>& in) { return transform(in, FFTW_BACKWARD); }

double bin_freq(size_t k, size_t n, double fs) {
    const auto half = n / 2;
    const double kk = (k <= half && !(n % 2 == 0 && k == half))
                          ? static_cast<double>(k)
                          : static_cast<double>(k) - static_cast<double>(n);
    // even n: bin n/2 treated as -fs/2
    if (n % 2 == 0 && k == half) return -fs / 2.0;
    return kk * fs / static_cast<double>(n);
}

ComplexBlock frequency_shift(const ComplexBlock& block, double delta_f) {
    if (std::abs(delta_f) >= block.sample_rate / 2.0)
        throw std::invalid_argument("frequency_shift: |delta_f| must be below Nyquist");
    ComplexBlock out{std::vector<cplx>(block.size()), block.sample_rate};
    const double w = 2.0 * std::numbers::pi * delta_f / block.sample_rate;
    for (size_t n = 0; n < block.size(); ++n)
        out.samples[n] = block.samples[n] * std::polar(1.0, w * static_cast<double>(n));
    return out;
}

std::vector<cplx> fractional_delay(const std::vector<cplx>& in, double tau, double fs) {
    if (tau == 0.0 || in.empty()) return in;
    auto spec = fft(in);
    const size_t n = in.size();
    for (size_t k = 0; k < n; ++k) {
        const double f = bin_freq(k, n, fs);
        if (n % 2 == 0 && k == n / 2) {
            // Nyquist bin: keep the ramp conjugate-symmetric.
            spec[k] *= std::cos(2.0 * std::numbers::pi * f * tau);
        } else {
            spec[k] *= std::polar(1.0, -2.0 * std::numbers::pi * f * tau);
        }
    }
    return ifft(spec);
}

std::vector<double> fractional_delay(const std::vector<double>& in, double tau, double fs) {
    std::vector<cplx> c(in.begin(), in.end());
    auto delayed = fractional_delay(c, tau, fs);
    std::vector<double> out(in.size());
    for (size_t i = 0; i < in.size(); ++i) out[i] = delayed[i].real();
    return out;
}

ComplexBlock fractional_delay(const ComplexBlock& block, double tau) {
    return {fractional_delay(block.samples, tau, block.sample_rate), block.sample_rate};
}

std::vector<double> rrc_taps(double rolloff, int sps, int span) {
    if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("rrc: rolloff outside [0,1]");
    if (sps < 2) throw std::invalid_argument("rrc: sps must be >= 2");
    const int ntaps = span * sps + 1;
    std::vector<double> taps(ntaps);
    const double b = rolloff;
    for (int i = 0; i < ntaps; ++i) {
        const double x = (i - (ntaps - 1) / 2.0) / sps;  // in symbol periods
        double h;
        if (std::abs(x) < 1e-12) {
            h = 1.0 - b + 4.0 * b / std::numbers::pi;
        } else if (b > 0.0 && std::abs(std::abs(x) - 1.0 / (4.0 * b)) < 1e-9) {
            h = (b / std::numbers::sqrt2) *
                ((1.0 + 2.0 / std::numbers::pi) * std::sin(std::numbers::pi / (4.0 * b)) +
                 (1.0 - 2.0 / std::numbers::pi) * std::cos(std::numbers::pi / (4.0 * b)));
        } else {
            const double num = std::sin(std::numbers::pi * x * (1.0 - b)) +
                               4.0 * b * x * std::cos(std::numbers::pi * x * (1.0 + b));
            const double den = std::numbers::pi * x * (1.0 - std::pow(4.0 * b * x, 2));
            h = num / den;
        }
        taps[i] = h;
    }
    double energy = 0.0;
    for (double t : taps) energy += t * t;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& t : taps) t *= scale;
    return taps;
}

std::vector<cplx> filter_same(const std::vector<cplx>& in, const std::vector<double>& taps) {
    const size_t n = in.size(), m = taps.size();
    if (n == 0) return {};
    const size_t full = n + m - 1;
    std::vector<cplx> a(full, 0.0), b(full, 0.0);
    std::copy(in.begin(), in.end(), a.begin());
    std::copy(taps.begin(), taps.end(), b.begin());
    auto fa = fft(a);
    auto fb = fft(b);
    for (size_t k = 0; k < full; ++k) fa[k] *= fb[k];
    auto conv = ifft(fa);
    const size_t start = (m - 1) / 2;
    return {conv.begin() + start, conv.begin() + start + n};
}

ComplexBlock rrc_shape(const std::vector<cplx>& symbols, double rolloff, int sps,
                       double symbol_rate, int span) {
    const auto taps = rrc_taps(rolloff, sps, span);
    std::vector<cplx> up(symbols.size() * sps, 0.0);
    for (size_t i = 0; i < symbols.size(); ++i) up[i * sps] = symbols[i];
    return {filter_same(up, taps), symbol_rate * sps};
}

ComplexBlock rrc_matched_filter(const ComplexBlock& block, double rolloff, int sps, int span) {
    const auto taps = rrc_taps(rolloff, sps, span);
    return {filter_same(block.samples, taps), block.sample_rate};
}

ComplexBlock resample(const ComplexBlock& block, double new_rate) {
    if (new_rate <= 0.0) throw std::invalid_argument("resample: rate must be > 0");
    const size_t n = block.size();
    if (new_rate == block.sample_rate || n == 0) return block;
    const double exact = static_cast<double>(n) * new_rate / block.sample_rate;
    const double rounded = std::round(exact);
    if (std::abs(exact - rounded) > 1e-6 || rounded < 1.0)
        throw std::invalid_argument("resample: block length not compatible with rational ratio");
    const size_t m = static_cast<size_t>(rounded);
    auto spec = fft(block.samples);
    std::vector<cplx> out_spec(m, 0.0);
    const size_t keep = std::min(n, m);
    const size_t half = keep / 2;
    for (size_t k = 0; k < half; ++k) out_spec[k] = spec[k];
    for (size_t k = 1; k <= keep - half - 1; ++k) out_spec[m - k] = spec[n - k];
    if (keep % 2 == 0) {
        // split/merge the Nyquist bin so real signals stay real
        if (m > n) {
            out_spec[half] = spec[half] * 0.5;
            out_spec[m - half] += spec[half] * 0.5;
        } else if (m < n) {
            out_spec[half] = spec[half] + spec[n - half];
        } else {
            out_spec[half] = spec[half];
        }
    }
    auto out = ifft(out_spec);
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    for (auto& v : out) v *= scale;
    return {std::move(out), new_rate};
}

double mean_power(const std::vector<cplx>& v) {
    double p = 0.0;
    for (const auto& s : v) p += std::norm(s);
    return v.empty() ? 0.0 : p / static_cast<double>(v.size());
}

double mean_power(const ComplexBlock& b) { return mean_power(b.samples); }

}  // namespace dscm
