#ifndef DSCM_PIPELINE_HPP
#define DSCM_PIPELINE_HPP

#include <numbers>
#include <string>

#include "dscm/channel.hpp"
#include "dscm/mgpd.hpp"
#include "dscm/polaris.hpp"
#include "dscm/rxdsp.hpp"
#include "dscm/txdsp.hpp"

// End-to-end data-mode trial: Tx DSP -> channel -> receiver front end ->
// pilot demux (or MIMO) -> subcarrier chain -> BER.

namespace dscm {

enum class Scheme { None, Spt, Dpt, MimoCmma };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ImpairmentConfig {
    RsopPdlParams rsop;
    LinkParams link;
    FrontEndImpairments frontend;
};

struct TrialConfig {
    Scheme scheme = Scheme::Spt;
    DscmConfig dscm;
    PilotDescriptor pilots;
    ImpairmentConfig imp;
    ExtractorConfig extractor;
    EqualizerConfig eq;
    size_t aggregate_symbols = 1u << 17;
    uint64_t seed = 1;
    double foe_search_span = 1.5e9;
    size_t discard_symbols = 4096;  // equalizer settle, excluded from BER
    bool compensate_skew = false;   // MGPD calibration + Y-rail advance
    ObtbConfig obtb;                // calibration settings when enabled
    RsopPdlParams obtb_rotation{0.0, std::numbers::pi / 4.0, 0.3, 0.2, 0.0, 0.0};
};

struct TrialResult {
    BerReport ber;
    double foe_hz = 0.0;
    double skew_est_ps = std::numeric_limits<double>::quiet_NaN();
    int swapped_outputs = 0;  // MIMO outputs matched to the other reference
    std::string diagnostics;
};

TrialResult run_data_trial(const TrialConfig& cfg);

// Mean cross-polarization leakage of a demultiplexed waveform against the
// clean transmitted one (diagnostic used by tests).
double cross_pol_leakage_db(const DualPolWaveform& demuxed, const DualPolWaveform& sent);

}  // namespace dscm

#endif
