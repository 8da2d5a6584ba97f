#ifndef DSCM_SIGNAL_HPP
#define DSCM_SIGNAL_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Value types and sample-domain primitives shared by the whole library.
// All blocks carry an explicit sample rate; operations reject rate
// mismatches instead of resampling implicitly.

namespace dscm {

using cplx = std::complex<double>;

struct ComplexBlock {
    std::vector<cplx> samples;
    double sample_rate = 0.0;

    size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

struct DualPolWaveform {
    ComplexBlock x;
    ComplexBlock y;

    size_t size() const { return x.size(); }
    double sample_rate() const { return x.sample_rate; }
};

// Four real-valued tributaries as seen after photodetection, before the
// Rx-DSP recombines them into complex signals.
struct QuadTributaryCapture {
    std::vector<double> xi, xq, yi, yq;
    double sample_rate = 0.0;

    size_t size() const { return xi.size(); }
};

void check_finite(const ComplexBlock& b, const char* what);
void check_pair(const DualPolWaveform& w);

// --- FFT helpers (FFTW-backed, planner guarded internally) ---
std::vector<cplx> fft(const std::vector<cplx>& in);
std::vector<cplx> ifft(const std::vector<cplx>& in);

// Two-sided bin frequency for bin k of an n-point FFT at rate fs.
double bin_freq(size_t k, size_t n, double fs);

// --- primitive operations ---

// Multiply sample n by exp(j*2*pi*delta_f*n/fs). Rejects shifts at or
// beyond Nyquist.
ComplexBlock frequency_shift(const ComplexBlock& block, double delta_f);

// Frequency-domain linear phase ramp exp(-j*2*pi*f*tau) over the two-sided
// spectrum. Exact for band-limited content; circular at block edges, so
// downstream measurements discard a guard region (kEdgeGuard samples).
std::vector<cplx> fractional_delay(const std::vector<cplx>& in, double tau, double fs);
std::vector<double> fractional_delay(const std::vector<double>& in, double tau, double fs);
ComplexBlock fractional_delay(const ComplexBlock& block, double tau);

inline constexpr size_t kEdgeGuard = 256;

// Unit-energy root-raised-cosine taps, span symbols long (sps samples per
// symbol, span*sps+1 taps).
std::vector<double> rrc_taps(double rolloff, int sps, int span = 32);

// Centered ("same") linear convolution with real taps.
std::vector<cplx> filter_same(const std::vector<cplx>& in, const std::vector<double>& taps);

// Upsample by sps and pulse-shape with unit-energy RRC taps.
ComplexBlock rrc_shape(const std::vector<cplx>& symbols, double rolloff, int sps,
                       double symbol_rate, int span = 32);

// Receive-side matched filter at the block's current rate.
ComplexBlock rrc_matched_filter(const ComplexBlock& block, double rolloff, int sps,
                                int span = 32);

// Exact band-limited rational resampling (frequency-domain). The target
// length n*new_rate/old_rate must be an integer.
ComplexBlock resample(const ComplexBlock& block, double new_rate);

double mean_power(const ComplexBlock& b);
double mean_power(const std::vector<cplx>& v);

}  // namespace dscm

#endif
