#ifndef DSCM_POLARIS_HPP
#define DSCM_POLARIS_HPP

#include <optional>

#include "dscm/channel.hpp"
#include "dscm/signal.hpp"

// Pilot-tone engine: frequency-offset estimation, pilot extraction, DPT and
// SPT Jones-matrix estimation, inverse application, and the analytic
// skew-corruption predictor.

namespace dscm {

enum class LpfKind { SinglePole, MovingAverage, Fir };

struct ExtractorConfig {
    double lpf_bandwidth_hz = 100e6;  // single-sided cutoff
    LpfKind lpf_kind = LpfKind::Fir;
    int fir_taps = 255;
    size_t decimation = 64;
};

struct PilotTrace {
    std::vector<cplx> values;
    double pilot_freq = 0.0;
    size_t stride = 1;        // waveform samples per trace sample
    double sample_rate = 0.0; // trace rate (waveform rate / stride)
};

// Pilot-peak periodogram FOE. Returns the offset of the observed tone near
// expected_f1, refined by quadratic interpolation. Throws when no peak
// stands >= 10 dB above the window's median spectral density.
double estimate_frequency_offset(const DualPolWaveform& w, double expected_f1,
                                 double search_span);

// Down-convert both polarizations by f, low-pass, decimate. Group delay is
// compensated so traces align with the waveform time base.
std::pair<PilotTrace, PilotTrace> extract_pilot(const DualPolWaveform& w, double f,
                                                const ExtractorConfig& cfg);

// Two-pilot estimator: columns from the two pilot frequencies, each column
// normalized to unit norm. Near-singular samples carry a degenerate flag.
JonesTrajectory estimate_jones_dpt(const PilotTrace& px1, const PilotTrace& py1,
                                   const PilotTrace& px2, const PilotTrace& py2);

// Single-pilot estimator: unitary completion of the f1 column, normalized
// to unit determinant.
JonesTrajectory estimate_jones_spt(const PilotTrace& px1, const PilotTrace& py1);

// Per-sample inverse of the (interpolated) trajectory. Degenerate samples
// hold the last valid matrix.
DualPolWaveform apply_inverse_jones(const DualPolWaveform& w, const JonesTrajectory& traj);

// Analytic model of what the DPT/SPT estimators will report for a static
// channel J observed through Rx-XY-skew tau_xy. SPT prediction when f2 is
// absent.
Jones2x2 predict_skewed_jones(const Jones2x2& j, double tau_xy, double f1,
                              std::optional<double> f2 = std::nullopt);

}  // namespace dscm

#endif
