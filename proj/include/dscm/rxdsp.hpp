#ifndef DSCM_RXDSP_HPP
#define DSCM_RXDSP_HPP

#include <array>
#include <string>

#include "dscm/channel.hpp"
#include "dscm/signal.hpp"
#include "dscm/txdsp.hpp"

// Receive chain: subcarrier demultiplexing, matched filtering, CDC,
// synchronization, CMMA equalization (SISO and 2x2 MIMO), BPS carrier
// recovery, and BER measurement.

namespace dscm {

struct EqualizerConfig {
    int taps = 15;
    double mu_cma = 1e-3;
    double mu_cmma = 1e-4;
    size_t cma_pretrain_symbols = 20000;
    // 16QAM modulus targets for the unit-power grid
    std::array<double, 3> radii = {std::sqrt(0.2), 1.0, std::sqrt(1.8)};
    double cma_r2 = 1.32;  // E|s|^4 / E|s|^2 for unit-power 16QAM
    int bps_test_phases = 32;
    size_t bps_window = 96;  // sliding-window length, symbols
};

struct BerCell {
    size_t bit_errors = 0;
    size_t bits_counted = 0;
    double ber() const { return bits_counted ? static_cast<double>(bit_errors) / bits_counted : 0.0; }
};

struct BerReport {
    // indexed [pol][subcarrier]
    std::array<std::vector<BerCell>, 2> cells;
    bool low_confidence = false;

    size_t total_errors() const;
    size_t total_bits() const;
    double aggregate_ber() const;
    double q_db() const;
};

double q_factor_db(double ber);

// Per subcarrier: shift to baseband, resample to 2 samples/symbol, RRC
// matched filter. Output indexed [pol][subcarrier], at 2 sps.
std::array<std::vector<ComplexBlock>, 2> demux_subcarriers(const DualPolWaveform& w,
                                                           const DscmConfig& cfg);

struct SyncResult {
    long lag = 0;            // rx index = ref index + lag
    std::vector<cplx> rx;    // trimmed to the overlap
    std::vector<cplx> ref;
};

// Envelope cross-correlation alignment against the known reference.
SyncResult synchronize(const std::vector<cplx>& rx_symbols, const std::vector<cplx>& ref_symbols);

// Fractionally spaced SISO equalizer: CMA pre-convergence, then
// radius-directed CMMA on the three 16QAM moduli. Input at 2 sps.
std::vector<cplx> equalize_siso_cmma(const std::vector<cplx>& in, const EqualizerConfig& cfg);

struct MimoResult {
    std::vector<cplx> x, y;
    bool singular = false;  // both outputs converged onto one polarization
};

// Butterfly 2x2 fractionally spaced CMMA (joint polarization demux).
MimoResult equalize_mimo_cmma(const std::vector<cplx>& x, const std::vector<cplx>& y,
                              const EqualizerConfig& cfg);

// Sliding-window blind phase search over [-pi/4, pi/4), unwrapped per
// symbol. The residual pi/2 ambiguity is left for resolve_quadrant.
std::vector<cplx> bps_carrier_recovery(const std::vector<cplx>& symbols, int num_test_phases = 32,
                                       size_t window = 96);

// Pick the pi/2 rotation minimizing symbol errors against the reference.
std::vector<cplx> resolve_quadrant(const std::vector<cplx>& rx, const std::vector<cplx>& ref);

BerCell count_bit_errors(const std::vector<uint8_t>& decided, const std::vector<uint8_t>& ref);

}  // namespace dscm

#endif
