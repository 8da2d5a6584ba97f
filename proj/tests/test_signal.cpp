#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dscm/signal.hpp"

using namespace dscm;

namespace {

ComplexBlock tone(double f, double fs, size_t n, double amp = 1.0) {
    ComplexBlock b;
    b.sample_rate = fs;
    b.samples.resize(n);
    for (size_t k = 0; k < n; ++k)
        b.samples[k] = amp * std::polar(1.0, 2.0 * std::numbers::pi * f * k / fs);
    return b;
}

size_t fft_peak_bin(const std::vector<cplx>& v) {
    auto spec = fft(v);
    size_t best = 0;
    double mx = 0.0;
    for (size_t k = 0; k < spec.size(); ++k)
        if (std::abs(spec[k]) > mx) { mx = std::abs(spec[k]); best = k; }
    return best;
}

// Closed-form RRC impulse response at t symbols, rolloff b (pre-normalization).
double rrc_closed_form(double t, double b) {
    const double pi = std::numbers::pi;
    if (std::abs(t) < 1e-12) return 1.0 - b + 4.0 * b / pi;
    if (b > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-9) {
        return b / std::sqrt(2.0) *
               ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) +
                (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
    }
    const double den = pi * t * (1.0 - 16.0 * b * b * t * t);
    return (std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b))) / den;
}

std::vector<cplx> random_symbols(size_t n, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(0, 3);
    std::vector<cplx> out(n);
    const double lv[4] = {-3.0, -1.0, 1.0, 3.0};
    for (auto& s : out) s = cplx(lv[d(rng)], lv[d(rng)]) / std::sqrt(10.0);
    return out;
}

}  // namespace

TEST_CASE("frequency_shift: zero shift is the identity") {
    auto b = tone(1e9, 10e9, 1024);
    auto out = frequency_shift(b, 0.0);
    REQUIRE(out.size() == b.size());
    for (size_t k = 0; k < b.size(); ++k) CHECK(out.samples[k] == b.samples[k]);
}

TEST_CASE("frequency_shift: moves a tone's FFT peak by the shift") {
    const double fs = 16e9;
    const size_t n = 4096;
    auto b = tone(1e9, fs, n);  // bin 256
    auto out = frequency_shift(b, 2e9);
    CHECK(fft_peak_bin(out.samples) == fft_peak_bin(b.samples) + 512);
}

TEST_CASE("frequency_shift: +delta then -delta round trip") {
    auto b = tone(0.7e9, 10e9, 2048);
    auto rt = frequency_shift(frequency_shift(b, 1.234e9), -1.234e9);
    double err = 0.0;
    for (size_t k = 0; k < b.size(); ++k)
        err = std::max(err, std::abs(rt.samples[k] - b.samples[k]));
    CHECK(err < 1e-12);
}

TEST_CASE("frequency_shift: preserves power and rejects shifts at Nyquist") {
    auto b = tone(1e9, 10e9, 1024, 1.7);
    auto out = frequency_shift(b, 3e9);
    CHECK(mean_power(out) == doctest::Approx(mean_power(b)).epsilon(1e-14));
    CHECK_THROWS_AS((void)frequency_shift(b, 5e9), std::invalid_argument);
    CHECK_THROWS_AS((void)frequency_shift(b, -6e9), std::invalid_argument);
}

TEST_CASE("fractional_delay: zero delay is the identity") {
    auto b = tone(1e9, 10e9, 512);
    auto out = fractional_delay(b, 0.0);
    for (size_t k = 0; k < b.size(); ++k)
        CHECK(std::abs(out.samples[k] - b.samples[k]) < 1e-12);
}

TEST_CASE("fractional_delay: integer-sample delay equals circular shift") {
    const double fs = 10e9;
    std::mt19937 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(1024);
    for (auto& s : v) s = cplx(g(rng), g(rng));
    const int k0 = 13;
    auto out = fractional_delay(v, k0 / fs, fs);
    double err = 0.0;
    for (size_t k = 0; k < v.size(); ++k)
        err = std::max(err, std::abs(out[(k + k0) % v.size()] - v[k]));
    CHECK(err < 1e-10);
}

TEST_CASE("fractional_delay: tone picks up phase -2*pi*f*tau") {
    const double fs = 20e9, f1 = 2.5e9, tau = 7.3e-12;
    const size_t n = 4000;  // f1 lands on bin 500
    std::vector<double> v(n);
    for (size_t k = 0; k < n; ++k) v[k] = std::cos(2.0 * std::numbers::pi * f1 * k / fs);
    auto out = fractional_delay(v, tau, fs);
    std::vector<cplx> c(out.begin(), out.end());
    auto spec = fft(c);
    const size_t bin = static_cast<size_t>(f1 / fs * n);
    const double want = -2.0 * std::numbers::pi * f1 * tau;
    CHECK(std::arg(spec[bin] * std::polar(1.0, -want)) == doctest::Approx(0.0).epsilon(1e-9));
    // real input stays real
    double imax = 0.0;
    for (double s : out) (void)s;
    for (size_t k = 0; k < n; ++k) imax = std::max(imax, std::abs(out[k]));
    CHECK(imax <= 1.0 + 1e-9);
}

TEST_CASE("fractional_delay: linearity and composition") {
    const double fs = 10e9;
    std::mt19937 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    // band-limited inputs: the delay operator is exact (and composes) only
    // below Nyquist, where the phase ramp is a pure exponential
    auto bandlimited = [&] {
        std::vector<cplx> s(512);
        for (auto& x : s) x = cplx(g(rng), g(rng));
        auto spec = fft(s);
        for (size_t k = 512 * 2 / 5; k <= 512 * 3 / 5; ++k) spec[k] = 0.0;
        auto out = ifft(spec);
        return out;
    };
    std::vector<cplx> u = bandlimited(), v = bandlimited();
    const double t1 = 3.7e-12, t2 = -1.9e-12;
    const cplx a(0.6, -0.2), b(1.1, 0.4);

    std::vector<cplx> mix(512);
    for (size_t k = 0; k < 512; ++k) mix[k] = a * u[k] + b * v[k];
    auto lhs = fractional_delay(mix, t1, fs);
    auto du = fractional_delay(u, t1, fs);
    auto dv = fractional_delay(v, t1, fs);
    double err = 0.0;
    for (size_t k = 0; k < 512; ++k)
        err = std::max(err, std::abs(lhs[k] - (a * du[k] + b * dv[k])));
    CHECK(err < 1e-10);

    auto comp = fractional_delay(fractional_delay(u, t1, fs), t2, fs);
    auto direct = fractional_delay(u, t1 + t2, fs);
    err = 0.0;
    for (size_t k = 0; k < 512; ++k) err = std::max(err, std::abs(comp[k] - direct[k]));
    CHECK(err < 1e-10);
}

TEST_CASE("rrc_taps: matches the closed-form impulse response") {
    const double beta = 0.1;
    const int sps = 2, span = 32;
    auto taps = rrc_taps(beta, sps, span);
    REQUIRE(taps.size() == static_cast<size_t>(span * sps + 1));
    // build the un-normalized closed form and normalize to unit energy
    std::vector<double> ref(taps.size());
    const int mid = span * sps / 2;
    double e = 0.0;
    for (size_t k = 0; k < ref.size(); ++k) {
        ref[k] = rrc_closed_form((static_cast<int>(k) - mid) / double(sps), beta);
        e += ref[k] * ref[k];
    }
    for (auto& t : ref) t /= std::sqrt(e);
    for (size_t k = 0; k < taps.size(); ++k)
        CHECK(taps[k] == doctest::Approx(ref[k]).epsilon(1e-9));
}

TEST_CASE("rrc cascade is Nyquist: no ISI at symbol instants") {
    const int sps = 2, span = 64;  // long span so truncation ISI sits below the check
    auto taps = rrc_taps(0.1, sps, span);
    // convolve the taps with themselves -> raised cosine
    std::vector<double> rc(2 * taps.size() - 1, 0.0);
    for (size_t i = 0; i < taps.size(); ++i)
        for (size_t j = 0; j < taps.size(); ++j) rc[i + j] += taps[i] * taps[j];
    const size_t mid = taps.size() - 1;
    const double peak = rc[mid];
    for (size_t k = sps; k + mid < rc.size(); k += sps) {
        CHECK(std::abs(rc[mid + k]) < 1e-3 * peak);
        CHECK(std::abs(rc[mid - k]) < 1e-3 * peak);
    }
}

TEST_CASE("rrc_shape: -20 dB bandwidth scales with (1+rolloff)") {
    const double baud = 10e9;
    const int sps = 4;
    auto syms = random_symbols(8192, 3);
    auto measure = [&](double beta) {
        auto b = rrc_shape(syms, beta, sps, baud);
        auto spec = fft(b.samples);
        const size_t n = spec.size();
        // average PSD in the flat middle of the band
        double mid = 0.0;
        size_t cnt = 0;
        for (size_t k = 0; k < n / 32; ++k) { mid += std::norm(spec[k]); ++cnt; }
        mid /= cnt;
        // walk outward to the -20 dB point (smooth over a few bins)
        const size_t w = 16;
        for (size_t k = n / 32; k < n / 2 - w; ++k) {
            double p = 0.0;
            for (size_t j = 0; j < w; ++j) p += std::norm(spec[k + j]);
            p /= w;
            if (p < mid * 1e-2) return bin_freq(k, n, b.sample_rate);
        }
        return 0.0;
    };
    const double b0 = measure(0.0), b1 = measure(0.1);
    CHECK(b1 / b0 == doctest::Approx(1.1).epsilon(0.03));
}

TEST_CASE("rrc_shape: output energy equals input symbol energy") {
    auto syms = random_symbols(4096, 11);
    auto b = rrc_shape(syms, 0.1, 2, 25e9);
    double es = 0.0, eo = 0.0;
    for (const auto& s : syms) es += std::norm(s);
    for (const auto& s : b.samples) eo += std::norm(s);
    CHECK(eo == doctest::Approx(es).epsilon(1e-3));
}

TEST_CASE("resample: same rate is the identity") {
    auto b = tone(1e9, 10e9, 1000);
    auto out = resample(b, 10e9);
    REQUIRE(out.size() == b.size());
    for (size_t k = 0; k < b.size(); ++k) CHECK(out.samples[k] == b.samples[k]);
}

TEST_CASE("resample: preserves a tone's frequency") {
    const double fs = 10e9, f0 = 1.25e9;
    auto b = tone(f0, fs, 4096);
    auto up = resample(b, 12.5e9);  // 4096 -> 5120
    REQUIRE(up.size() == 5120);
    const size_t peak = fft_peak_bin(up.samples);
    CHECK(bin_freq(peak, up.size(), up.sample_rate) == doctest::Approx(f0).epsilon(1e-9));
}

TEST_CASE("resample: up/down round trip is near-exact in the interior") {
    const double fs = 10e9;
    auto syms = random_symbols(2048, 5);
    auto b = rrc_shape(syms, 0.1, 2, fs / 2);  // band-limited content
    auto rt = resample(resample(b, 15e9), fs);
    REQUIRE(rt.size() == b.size());
    double err = 0.0;
    for (size_t k = kEdgeGuard; k + kEdgeGuard < b.size(); ++k)
        err = std::max(err, std::abs(rt.samples[k] - b.samples[k]));
    CHECK(err < 1e-6);
}

TEST_CASE("resample: rejects lengths incompatible with the ratio") {
    auto b = tone(1e9, 10e9, 1000);
    CHECK_THROWS_AS((void)resample(b, 10.003e9), std::invalid_argument);  // 1000.3 samples
}

TEST_CASE("resample: downsampling brick-walls out-of-band content") {
    // frequency-domain truncation removes out-of-band tones instead of
    // folding them back in-band
    const double fs = 20e9;
    const double f_lo = fs * 200 / 4096, f_hi = fs * 1600 / 4096;  // bin-aligned
    auto b = tone(f_lo, fs, 4096);
    auto hi = tone(f_hi, fs, 4096, 0.5);
    for (size_t k = 0; k < b.size(); ++k) b.samples[k] += hi.samples[k];
    auto dn = resample(b, 10e9);
    auto spec = fft(dn.samples);
    const size_t n = spec.size();  // 2048, same bin width as before
    double inband = std::norm(spec[200]);
    // under naive decimation f_hi would fold to f_hi - 10 GHz (bin n - 448)
    CHECK(std::norm(spec[n - 448]) < 1e-12 * inband);
}
