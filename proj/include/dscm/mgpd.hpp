#ifndef DSCM_MGPD_HPP
#define DSCM_MGPD_HPP

#include <string>

#include "dscm/channel.hpp"
#include "dscm/signal.hpp"

// PT-MGPD Rx-XY-skew estimation from an OBTB self-coherent capture of the
// cosine training tone, and its compensation.

namespace dscm {

struct SkewEstimate {
    double tau_xy = 0.0;           // seconds
    double angle_x = 0.0;          // radians, conjugate-product readouts
    double angle_y = 0.0;
    double tone_snr_x_db = 0.0;    // tone power over median bin power
    double tone_snr_y_db = 0.0;
    double unambiguous_range = 0.0;  // 1/(4*f1), seconds

    std::string to_json() const;
};

// Single-bin DFT projections of the XI and YI rails at +/- f1, conjugate
// multiplication and angle extraction, wrapped difference scaled by
// 1/(4*pi*f1). f1 must be bin-aligned with the capture length.
SkewEstimate estimate_rx_xy_skew(const QuadTributaryCapture& capture, double f1);

// Advance YI/YQ by the estimated skew; XI/XQ untouched.
QuadTributaryCapture compensate_rx_xy_skew(const QuadTributaryCapture& capture,
                                           const SkewEstimate& est);

struct ObtbConfig {
    double f1 = 2e9;
    double sample_rate = 100e9;
    size_t num_samples = 250000;  // keeps f1 = 2 GHz bin-aligned at 100 GSa/s
    double osnr_db = std::numeric_limits<double>::infinity();
    uint64_t seed = 1;
};

// Training tone -> static polarization rotation -> OSNR loading -> receiver
// front end -> estimator. CD, PMD, frequency offset and phase noise are all
// off in this calibration mode.
SkewEstimate run_obtb_calibration(const FrontEndImpairments& imp, const RsopPdlParams& rotation,
                                  const ObtbConfig& cfg);

}  // namespace dscm

#endif
