#ifndef DSCM_TXDSP_HPP
#define DSCM_TXDSP_HPP

#include <array>
#include <cstdint>
#include <string>

#include "dscm/signal.hpp"

// Transmit DSP: PRBS generation, 16QAM mapping, DSCM multiplexing, pilot
// insertion, and the skew-calibration training waveform.

namespace dscm {

enum class PilotScheme { None, Spt, Dpt, MgpdTraining };

struct DscmConfig {
    double total_baud = 50e9;   // aggregate symbol rate over all subcarriers
    int num_subcarriers = 4;
    double rolloff = 0.1;
    double guard_band = 0.0;    // Hz gap between adjacent subcarriers
    int sps = 2;                // simulation samples per aggregate symbol

    double subcarrier_baud() const { return total_baud / num_subcarriers; }
    double sample_rate() const { return total_baud * sps; }
    // center-to-center spacing
    double subcarrier_spacing() const { return subcarrier_baud() * (1.0 + rolloff) + guard_band; }
    double subcarrier_center(int i) const {
        return (i - (num_subcarriers - 1) / 2.0) * subcarrier_spacing();
    }
    // samples per subcarrier symbol at the simulation rate
    int subcarrier_sps() const { return num_subcarriers * sps; }
};

struct PilotDescriptor {
    PilotScheme scheme = PilotScheme::Spt;
    double f1 = 0.0;       // Hz; X-polarization pilot
    double f2 = -0.5e9;    // Hz; Y-polarization pilot (DPT only)
    double psr_db = -10.0; // pilot-to-total-signal power ratio
};

struct FramePayload {
    // bits/symbols indexed [pol][subcarrier]
    std::array<std::vector<std::vector<uint8_t>>, 2> bits;
    std::array<std::vector<std::vector<cplx>>, 2> symbols;
    uint64_t seed = 1;
};

std::vector<uint8_t> generate_prbs(int order, uint32_t seed, size_t n);

std::vector<cplx> map_16qam(const std::vector<uint8_t>& bits);
std::vector<uint8_t> demap_16qam(const std::vector<cplx>& symbols);
cplx slice_16qam(cplx s);
const std::array<cplx, 16>& constellation_16qam();
std::string gray_map_json();  // golden-table serialization

// symbols_per_subcarrier per polarization per subcarrier
FramePayload make_payload(const DscmConfig& cfg, size_t symbols_per_subcarrier, uint64_t seed);

// RRC-shape each subcarrier at its own baud, shift to its center and sum;
// per-polarization output power normalized to 1.
DualPolWaveform build_dscm(const FramePayload& payload, const DscmConfig& cfg);

DualPolWaveform insert_pilots(const DualPolWaveform& w, const PilotDescriptor& p);

// The pure pilot waveform insert_pilots adds (for tests and amplitude math).
DualPolWaveform pilot_waveform(const PilotDescriptor& p, size_t n, double fs,
                               double signal_power_per_pol);

// PT-MGPD training: real cosine on X, zeros on Y. f1 must be FFT-bin
// aligned for the given duration.
DualPolWaveform generate_mgpd_training(double f1, double duration, double sample_rate);

}  // namespace dscm

#endif
