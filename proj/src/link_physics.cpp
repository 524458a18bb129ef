#include "nli/link_physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nli {

double beta2_eff(const FiberParams& fiber, double f_nch, double f_cut) noexcept {
    return fiber.beta2 + std::numbers::pi * fiber.beta3 * (f_nch + f_cut - 2.0 * fiber.f_c);
}

double alpha_profile(const LossModel& loss, double f, double z) {
    return loss.alpha0_at(f) + loss.alpha1_at(f) * std::exp(-loss.sigma_at(f) * z);
}

double fiber_power_transfer(const Span& span, double f) {
    const double a0 = span.loss.alpha0_at(f);
    const double a1 = span.loss.alpha1_at(f);
    const double sg = span.loss.sigma_at(f);
    const double L = span.fiber.length;
    // expm1 keeps the SRS term accurate when sigma L is small.
    return std::exp(-2.0 * a0 * L + 2.0 * a1 * std::expm1(-sg * L) / sg);
}

double lumped_gain_at(const Span& span, double f) {
    if (span.lumped_gain.is_transparent()) return 1.0 / fiber_power_transfer(span, f);
    return span.lumped_gain.gains().nearest(f);
}

double span_power_transfer(const Span& span, double f) {
    if (span.lumped_gain.is_transparent()) return 1.0;
    return span.lumped_gain.gains().nearest(f) * fiber_power_transfer(span, f);
}

double link_transfer(const Link& link, double f, std::size_t first, std::size_t end) {
    if (first > end || end > link.spans.size())
        throw std::out_of_range("link_transfer: span range [" + std::to_string(first) + ", " + std::to_string(end) +
                                ") outside a link of " + std::to_string(link.spans.size()) + " spans");
    double product = 1.0;
    for (std::size_t i = first; i < end; ++i) product *= span_power_transfer(link.spans[i], f);
    return product;
}

LossModel SrsFit::to_loss_model(const WdmComb& comb, std::span<const double> baseline_alpha0) const {
    std::vector<FrequencyTable::Sample> a0, a1, sg;
    for (std::size_t i = 0; i < comb.channels.size(); ++i) {
        const double f = comb.channels[i].center;
        a0.push_back({f, baseline_alpha0[i]});
        a1.push_back({f, alpha1[i]});
        sg.push_back({f, sigma[i]});
    }
    auto by_frequency = [](const auto& x, const auto& y) { return x.frequency < y.frequency; };
    std::sort(a0.begin(), a0.end(), by_frequency);
    std::sort(a1.begin(), a1.end(), by_frequency);
    std::sort(sg.begin(), sg.end(), by_frequency);
    return {FrequencyTable(std::move(a0)), FrequencyTable(std::move(a1)), FrequencyTable(std::move(sg))};
}

SrsFit fit_srs_params(const WdmComb& comb, std::span<const double> baseline_alpha0, const SrsFitConfig& cfg) {
    const auto& ch = comb.channels;
    if (baseline_alpha0.size() != ch.size())
        throw std::invalid_argument("fit_srs_params: one baseline alpha0 per channel is required");
    if (!(cfg.raman_slope >= 0.0)) throw std::invalid_argument("fit_srs_params: raman slope must be non-negative");

    double total_power = 0.0;
    double weighted_alpha0 = 0.0;
    for (std::size_t j = 0; j < ch.size(); ++j) {
        total_power += ch[j].power();
        weighted_alpha0 += ch[j].power() * baseline_alpha0[j];
    }
    if (!(total_power > 0.0)) throw std::invalid_argument("fit_srs_params: comb carries zero total power");

    SrsFit fit;
    fit.alpha1.resize(ch.size());
    fit.sigma.resize(ch.size());
    const double uniform_sigma = 2.0 * weighted_alpha0 / total_power;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        double tilt = 0.0;
        for (std::size_t j = 0; j < ch.size(); ++j) tilt += ch[j].power() * (ch[j].center - ch[i].center);
        fit.alpha1[i] = -0.5 * cfg.raman_slope * tilt;
        if (const auto* table = std::get_if<PerChannelSigma>(&cfg.sigma_policy))
            fit.sigma[i] = table->sigma.nearest(ch[i].center);
        else
            fit.sigma[i] = uniform_sigma;
        if (!(std::abs(fit.alpha1[i]) < baseline_alpha0[i])) fit.flagged.push_back(i);
    }
    return fit;
}

}  // namespace nli
