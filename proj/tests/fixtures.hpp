#pragma once

// Small link builders shared by the test binaries.

#include "nli/model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace fixtures {

inline constexpr double kTHz = 1e12;
inline constexpr double kGHz = 1e9;

struct CombSpec {
    int channels = 5;
    double first_THz = 193.0;
    double spacing_GHz = 100.0;
    double bandwidth_GHz = 64.0;
    double power_W = 1e-3;
    int cut = 2;
};

inline nli::WdmComb comb(const CombSpec& c = {}) {
    nli::WdmComb out;
    for (int i = 0; i < c.channels; ++i) {
        const double bw = c.bandwidth_GHz * kGHz;
        out.channels.push_back({c.first_THz * kTHz + i * c.spacing_GHz * kGHz, bw, c.power_W / bw});
    }
    out.cut_index = static_cast<std::size_t>(c.cut);
    return out;
}

inline nli::FiberParams smf(double length_m = 80e3) {
    return {1.3e-3, -21.3e-27, 0.14e-39, 193.4 * kTHz, length_m};
}

/// Frequency-flat loss sampled at the comb's channel centres.
inline nli::LossModel flat_loss(const nli::WdmComb& comb, double alpha0, double alpha1_ratio = 0.0) {
    std::vector<nli::FrequencyTable::Sample> a0, a1, sg;
    for (const auto& ch : comb.channels) {
        a0.push_back({ch.center, alpha0});
        a1.push_back({ch.center, alpha1_ratio * alpha0});
        sg.push_back({ch.center, 2.0 * alpha0});
    }
    return {nli::FrequencyTable(a0), nli::FrequencyTable(a1), nli::FrequencyTable(sg)};
}

/// Loss with a linear alpha1 tilt across the comb: alpha1 = -tilt * alpha0 at the lowest
/// channel, +tilt * alpha0 at the highest.
inline nli::LossModel tilted_loss(const nli::WdmComb& comb, double alpha0, double tilt) {
    std::vector<nli::FrequencyTable::Sample> a0, a1, sg;
    const double lo = comb.channels.front().center;
    const double hi = comb.channels.back().center;
    for (const auto& ch : comb.channels) {
        const double t = hi > lo ? 2.0 * (ch.center - lo) / (hi - lo) - 1.0 : 0.0;
        a0.push_back({ch.center, alpha0});
        a1.push_back({ch.center, tilt * t * alpha0});
        sg.push_back({ch.center, 2.0 * alpha0});
    }
    return {nli::FrequencyTable(a0), nli::FrequencyTable(a1), nli::FrequencyTable(sg)};
}

inline nli::Span span(const CombSpec& c = {}, double alpha0 = 0.2 * std::numbers::ln10 / 20.0 / 1000.0,
                      double tilt = 0.0) {
    nli::Span s;
    s.fiber = smf();
    s.comb = comb(c);
    s.loss = tilted_loss(s.comb, alpha0, tilt);
    s.lumped_gain = nli::LumpedGain::transparent();
    return s;
}

inline nli::Link link(int spans, const nli::Span& proto) {
    nli::Link l;
    for (int i = 0; i < spans; ++i) l.spans.push_back(proto);
    return l;
}

}  // namespace fixtures
