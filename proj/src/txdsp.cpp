#include "dscm/txdsp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dscm {

namespace {

// primitive feedback polynomials, taps given as shift-register bit indices
struct PrbsSpec {
    int order;
    int tap;  // x^order + x^tap + 1
};

PrbsSpec prbs_spec(int order) {
    switch (order) {
        case 7: return {7, 6};
        case 15: return {15, 14};
        case 23: return {23, 18};
        case 31: return {31, 28};
        default: throw std::invalid_argument("generate_prbs: unsupported order");
    }
}

// per-axis Gray code: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
constexpr double kLevels[4] = {-3.0, -1.0, 1.0, 3.0};
constexpr int kGrayIndex[4] = {0, 1, 3, 2};          // 2-bit value -> level index
constexpr int kGrayBits[4] = {0, 1, 3, 2};           // level index -> 2-bit value
const double kQamScale = 1.0 / std::sqrt(10.0);

}  // namespace

std::vector<uint8_t> generate_prbs(int order, uint32_t seed, size_t n) {
    if (seed == 0) throw std::invalid_argument("generate_prbs: seed must be nonzero");
    const auto spec = prbs_spec(order);
    const uint32_t mask = (order == 31) ? 0x7FFFFFFFu : ((1u << order) - 1u);
    uint32_t state = seed & mask;
    if (state == 0) state = 1;
    std::vector<uint8_t> out(n);
    for (size_t i = 0; i < n; ++i) {
        const uint8_t bit = static_cast<uint8_t>(
            ((state >> (spec.order - 1)) ^ (state >> (spec.tap - 1))) & 1u);
        state = ((state << 1) | bit) & mask;
        out[i] = bit;
    }
    return out;
}

const std::array<cplx, 16>& constellation_16qam() {
    static const std::array<cplx, 16> table = [] {
        std::array<cplx, 16> t{};
        for (int v = 0; v < 16; ++v) {
            const int bi = (v >> 2) & 3;  // first two bits -> I
            const int bq = v & 3;         // last two bits  -> Q
            t[v] = cplx(kLevels[kGrayIndex[bi]], kLevels[kGrayIndex[bq]]) * kQamScale;
        }
        return t;
    }();
    return table;
}

std::vector<cplx> map_16qam(const std::vector<uint8_t>& bits) {
    if (bits.size() % 4 != 0) throw std::invalid_argument("map_16qam: bit count not multiple of 4");
    const auto& table = constellation_16qam();
    std::vector<cplx> out(bits.size() / 4);
    for (size_t i = 0; i < out.size(); ++i) {
        const int v = (bits[4 * i] << 3) | (bits[4 * i + 1] << 2) | (bits[4 * i + 2] << 1) |
                      bits[4 * i + 3];
        out[i] = table[v];
    }
    return out;
}

cplx slice_16qam(cplx s) {
    auto level = [](double v) {
        const double a = v / kQamScale;
        if (a < -2.0) return -3.0;
        if (a < 0.0) return -1.0;
        if (a < 2.0) return 1.0;
        return 3.0;
    };
    return cplx(level(s.real()), level(s.imag())) * kQamScale;
}

std::vector<uint8_t> demap_16qam(const std::vector<cplx>& symbols) {
    std::vector<uint8_t> out(symbols.size() * 4);
    auto idx = [](double v) {
        const double a = v / kQamScale;
        if (a < -2.0) return 0;
        if (a < 0.0) return 1;
        if (a < 2.0) return 2;
        return 3;
    };
    for (size_t i = 0; i < symbols.size(); ++i) {
        const int bi = kGrayBits[idx(symbols[i].real())];
        const int bq = kGrayBits[idx(symbols[i].imag())];
        out[4 * i] = static_cast<uint8_t>((bi >> 1) & 1);
        out[4 * i + 1] = static_cast<uint8_t>(bi & 1);
        out[4 * i + 2] = static_cast<uint8_t>((bq >> 1) & 1);
        out[4 * i + 3] = static_cast<uint8_t>(bq & 1);
    }
    return out;
}

std::string gray_map_json() {
    std::ostringstream os;
    os << "{\n  \"modulation\": \"16QAM\",\n  \"scale\": \"1/sqrt(10)\",\n  \"points\": [\n";
    const auto& table = constellation_16qam();
    for (int v = 0; v < 16; ++v) {
        os << "    {\"bits\": " << v << ", \"i\": " << table[v].real() / kQamScale
           << ", \"q\": " << table[v].imag() / kQamScale << "}";
        os << (v == 15 ? "\n" : ",\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

FramePayload make_payload(const DscmConfig& cfg, size_t symbols_per_subcarrier, uint64_t seed) {
    FramePayload p;
    p.seed = seed;
    for (int pol = 0; pol < 2; ++pol) {
        p.bits[pol].resize(cfg.num_subcarriers);
        p.symbols[pol].resize(cfg.num_subcarriers);
        for (int sc = 0; sc < cfg.num_subcarriers; ++sc) {
            uint32_t s = static_cast<uint32_t>(
                (seed * 0x9E3779B97F4A7C15ull + pol * 977u + sc * 131u + 1u) & 0x7FFFFFFFull);
            if (s == 0) s = 1;
            p.bits[pol][sc] = generate_prbs(31, s, 4 * symbols_per_subcarrier);
            p.symbols[pol][sc] = map_16qam(p.bits[pol][sc]);
        }
    }
    return p;
}

DualPolWaveform build_dscm(const FramePayload& payload, const DscmConfig& cfg) {
    if (cfg.num_subcarriers < 1) throw std::invalid_argument("build_dscm: need >= 1 subcarrier");
    if (cfg.guard_band < 0.0)
        throw std::invalid_argument("build_dscm: negative guard band would overlap subcarriers");
    const double fs = cfg.sample_rate();
    const int sps_sc = cfg.subcarrier_sps();
    DualPolWaveform w;
    for (int pol = 0; pol < 2; ++pol) {
        const auto& grids = payload.symbols[pol];
        if (static_cast<int>(grids.size()) != cfg.num_subcarriers)
            throw std::invalid_argument("build_dscm: payload subcarrier count mismatch");
        const size_t nsym = grids[0].size();
        for (const auto& g : grids)
            if (g.size() != nsym)
                throw std::invalid_argument("build_dscm: unequal per-subcarrier symbol counts");
        std::vector<cplx> sum(nsym * sps_sc, 0.0);
        for (int sc = 0; sc < cfg.num_subcarriers; ++sc) {
            auto shaped = rrc_shape(grids[sc], cfg.rolloff, sps_sc, cfg.subcarrier_baud());
            auto shifted = frequency_shift(shaped, cfg.subcarrier_center(sc));
            // Equal launch power per subcarrier: normalizing each band (not just
            // the pol total) keeps per-band SNR free of finite-block power jitter.
            const double psc = mean_power(shifted);
            const double ssc = psc > 0.0 ? 1.0 / std::sqrt(psc * cfg.num_subcarriers) : 1.0;
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += ssc * shifted.samples[i];
        }
        const double p = mean_power(sum);
        const double scale = p > 0.0 ? 1.0 / std::sqrt(p) : 1.0;
        for (auto& v : sum) v *= scale;
        (pol == 0 ? w.x : w.y) = ComplexBlock{std::move(sum), fs};
    }
    return w;
}

DualPolWaveform pilot_waveform(const PilotDescriptor& p, size_t n, double fs,
                               double signal_power_per_pol) {
    DualPolWaveform tones{{std::vector<cplx>(n, 0.0), fs}, {std::vector<cplx>(n, 0.0), fs}};
    if (p.scheme == PilotScheme::None) return tones;
    const double amp = std::sqrt(signal_power_per_pol * std::pow(10.0, p.psr_db / 10.0));
    const double w1 = 2.0 * std::numbers::pi * p.f1 / fs;
    for (size_t k = 0; k < n; ++k) tones.x.samples[k] = amp * std::polar(1.0, w1 * k);
    if (p.scheme == PilotScheme::Dpt) {
        if (p.f1 == p.f2) throw std::invalid_argument("insert_pilots: DPT requires f1 != f2");
        const double w2 = 2.0 * std::numbers::pi * p.f2 / fs;
        for (size_t k = 0; k < n; ++k) tones.y.samples[k] = amp * std::polar(1.0, w2 * k);
    }
    return tones;
}

DualPolWaveform insert_pilots(const DualPolWaveform& w, const PilotDescriptor& p) {
    check_pair(w);
    if (p.scheme == PilotScheme::None) return w;
    const double fs = w.sample_rate();
    if (std::abs(p.f1) >= fs / 2.0 || (p.scheme == PilotScheme::Dpt && std::abs(p.f2) >= fs / 2.0))
        throw std::invalid_argument("insert_pilots: pilot frequency beyond Nyquist");
    const auto tones = pilot_waveform(p, w.size(), fs, mean_power(w.x));
    DualPolWaveform out = w;
    for (size_t k = 0; k < w.size(); ++k) {
        out.x.samples[k] += tones.x.samples[k];
        out.y.samples[k] += tones.y.samples[k];
    }
    return out;
}

DualPolWaveform generate_mgpd_training(double f1, double duration, double sample_rate) {
    if (f1 <= 0.0 || f1 >= sample_rate / 2.0)
        throw std::invalid_argument("generate_mgpd_training: f1 outside (0, Nyquist)");
    const size_t n = static_cast<size_t>(std::round(duration * sample_rate));
    const double cycles = f1 * duration;
    if (std::abs(cycles - std::round(cycles)) > 1e-6)
        throw std::invalid_argument("generate_mgpd_training: f1 not FFT-bin aligned for duration");
    DualPolWaveform w{{std::vector<cplx>(n), sample_rate}, {std::vector<cplx>(n, 0.0), sample_rate}};
    const double wc = 2.0 * std::numbers::pi * f1 / sample_rate;
    for (size_t k = 0; k < n; ++k) w.x.samples[k] = std::cos(wc * static_cast<double>(k));
    return w;
}

}  // namespace dscm
