#pragma once

// Propagation quantities: effective dispersion, loss profiles, power transfer, SRS fit.

#include "nli/model.hpp"

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace nli {

/// beta2 + pi beta3 (f_nch + f_cut - 2 f_c): dispersion of a channel pair, taken constant
/// across each channel. Symmetric in its two frequencies.
[[nodiscard]] double beta2_eff(const FiberParams& fiber, double f_nch, double f_cut) noexcept;

/// alpha0(f) + alpha1(f) exp(-sigma(f) z), values sampled at the nearest table entry.
[[nodiscard]] double alpha_profile(const LossModel& loss, double f, double z);

/// exp(-2 integral_0^L alpha(f,z) dz) for the fiber alone (no lumped gain).
[[nodiscard]] double fiber_power_transfer(const Span& span, double f);

/// Lumped gain Gamma(f) at f. For a transparent span this is 1/fiber_power_transfer.
[[nodiscard]] double lumped_gain_at(const Span& span, double f);

/// Gamma(f) exp(-2 alpha0 L) exp(2 alpha1 (exp(-sigma L) - 1)/sigma). Exactly 1 for a
/// transparent span.
[[nodiscard]] double span_power_transfer(const Span& span, double f);

/// Product of span_power_transfer over spans [first, end) (0-based, half-open).
/// first == end gives exactly 1. Throws std::out_of_range unless first <= end <= N_s.
[[nodiscard]] double link_transfer(const Link& link, double f, std::size_t first, std::size_t end);

struct UniformAverageSigma {};

struct PerChannelSigma {
    FrequencyTable sigma;  // 1/m, sampled at channel centres
};

struct SrsFitConfig {
    double raman_slope = 0.0;  // C_r, 1/(W m Hz)
    std::variant<UniformAverageSigma, PerChannelSigma> sigma_policy = UniformAverageSigma{};
};

struct SrsFit {
    std::vector<double> alpha1;          // per channel, 1/m
    std::vector<double> sigma;           // per channel, 1/m
    std::vector<std::size_t> flagged;    // channels with |alpha1| >= alpha0

    /// Loss model sampled at the comb's channel centres.
    [[nodiscard]] LossModel to_loss_model(const WdmComb& comb, std::span<const double> baseline_alpha0) const;
};

/// First-order triangular-gain SRS fit:
///   alpha1_i = -(C_r/2) sum_j P_j (f_j - f_i),
///   sigma_i  = 2 * (power-weighted mean of alpha0), or the override table.
/// Throws std::invalid_argument on zero total power or mismatched sizes.
[[nodiscard]] SrsFit fit_srs_params(const WdmComb& comb, std::span<const double> baseline_alpha0,
                                    const SrsFitConfig& cfg);

}  // namespace nli
