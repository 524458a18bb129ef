#include "nli/engine.hpp"

#include "nli/error.hpp"
#include "nli/link_physics.hpp"
#include "nli/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nli {

namespace {

constexpr double kPi = std::numbers::pi;

void check_regime(const IslandParams& p) {
    if (!(p.alpha0 > 0.0)) throw ComputationError("island: alpha0 must be positive");
    if (!(p.sigma > 0.0)) throw ComputationError("island: sigma must be positive");
    if (!(std::abs(p.alpha1) < p.alpha0))
        throw ComputationError("island: perturbative regime violated (|alpha1| >= alpha0)");
    if (!(p.b_nch > 0.0) || !(p.b_cut > 0.0)) throw ComputationError("island: bandwidths must be positive");
}

void check_dispersive(const IslandParams& p) {
    check_regime(p);
    if (p.big_b == 0.0 || !std::isfinite(p.big_b))
        throw ComputationError("island: zero effective dispersion, the degenerate form applies");
}

// Weights of the two rational terms after partial fractions. At alpha1 = 0 `lead` is
// exactly 1 and `srs` exactly 0, so no sigma dependence survives.
struct Weights {
    double lead;  // multiplies the 2 alpha0 terms
    double srs;   // multiplies the 2 alpha0 + sigma terms
};

Weights weights(const IslandParams& p) {
    const double a0 = p.alpha0, a1 = p.alpha1, s = p.sigma;
    return {
        (s - 2.0 * a1) * (4.0 * a0 - 2.0 * a1 + s) / (s * (4.0 * a0 + s)),
        8.0 * a0 * a1 * (2.0 * a0 - a1 + s) / (s * (2.0 * a0 + s) * (4.0 * a0 + s)),
    };
}

struct XciArgs {
    double lo_a, hi_a;  // |B/(2 a0)|       (f_off -/+ B_nch/2) B_CUT/2
    double lo_c, hi_c;  // |B/(2 a0 + s)|   (f_off -/+ B_nch/2) B_CUT/2
};

XciArgs xci_args(const IslandParams& p) {
    const double lo = p.f_offset - 0.5 * p.b_nch;
    const double hi = p.f_offset + 0.5 * p.b_nch;
    const double ka = std::abs(p.big_b) / (2.0 * p.alpha0) * 0.5 * p.b_cut;
    const double kc = std::abs(p.big_b) / (2.0 * p.alpha0 + p.sigma) * 0.5 * p.b_cut;
    return {ka * lo, ka * hi, kc * lo, kc * hi};
}

struct SciArgs {
    double a;  // |B/(2 a0)| B_CUT^2/4
    double c;  // |B/(2 a0 + s)| B_CUT^2/4
};

SciArgs sci_args(const IslandParams& p) {
    const double q = 0.25 * p.b_cut * p.b_cut;
    return {std::abs(p.big_b) / (2.0 * p.alpha0) * q, std::abs(p.big_b) / (2.0 * p.alpha0 + p.sigma) * q};
}

template <class Kernel>
double xci(const IslandParams& p, Kernel kernel) {
    check_dispersive(p);
    const auto w = weights(p);
    const auto x = xci_args(p);
    const double diff_a = kernel(x.hi_a) - kernel(x.lo_a);
    const double diff_c = kernel(x.hi_c) - kernel(x.lo_c);
    return (w.lead * diff_a + w.srs * diff_c) / (2.0 * p.alpha0 * std::abs(p.big_b));
}

template <class Kernel>
double sci(const IslandParams& p, Kernel kernel) {
    check_dispersive(p);
    const auto w = weights(p);
    const auto x = sci_args(p);
    return (w.lead * kernel(x.a) + w.srs * kernel(x.c)) / (p.alpha0 * std::abs(p.big_b));
}

double checked_positive(double value, const char* form) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw ComputationError(std::string(form) + ": island integral is not finite and positive");
    return value;
}

}  // namespace

IslandParams island_params(const Span& span, std::size_t channel) {
    const auto& comb = span.comb;
    const Channel& ch = comb.channels.at(channel);
    const Channel& cut = comb.cut();
    return {
        span.loss.alpha0_at(ch.center),
        span.loss.alpha1_at(ch.center),
        span.loss.sigma_at(ch.center),
        4.0 * kPi * kPi * beta2_eff(span.fiber, ch.center, cut.center),
        channel == comb.cut_index ? 0.0 : ch.center - cut.center,
        ch.bandwidth,
        cut.bandwidth,
    };
}

double i_xci_li2(const IslandParams& p) {
    return checked_positive(xci(p, li2_imag_diff), "i_xci_li2");
}

double i_xci_asinh(const IslandParams& p) {
    return checked_positive(xci(p, li2_diff_asinh_approx), "i_xci_asinh");
}

double i_cut_li2(const IslandParams& p) {
    return checked_positive(sci(p, li2_imag_diff), "i_cut_li2");
}

double i_cut_asinh(const IslandParams& p) {
    return checked_positive(sci(p, li2_diff_asinh_approx), "i_cut_asinh");
}

double i_degenerate(const IslandParams& p) {
    check_regime(p);
    const double a0 = p.alpha0, a1 = p.alpha1, s = p.sigma;
    const double num = 2.0 * a0 - 2.0 * a1 + s;
    const double den = 2.0 * a0 + s;
    return p.b_cut * p.b_nch / (4.0 * a0 * a0) * (num * num) / (den * den);
}

double dispatch_argument(const IslandParams& p, IslandKind kind) {
    if (kind == IslandKind::sci) return 0.5 * sci_args(p).a;
    const auto x = xci_args(p);
    return 0.5 * std::max(std::abs(x.lo_a), std::abs(x.hi_a));
}

double min_li2_argument(const IslandParams& p, IslandKind kind) {
    if (kind == IslandKind::sci) return sci_args(p).c;
    const auto x = xci_args(p);
    return std::min({std::abs(x.lo_a), std::abs(x.hi_a), std::abs(x.lo_c), std::abs(x.hi_c)});
}

Branch select_branch(const IslandParams& p, IslandKind kind, const EngineOptions& opts) {
    if (p.big_b == 0.0 || dispatch_argument(p, kind) < opts.degenerate_threshold) return Branch::degenerate;
    switch (opts.policy) {
        case BranchPolicy::li2: return Branch::li2;
        case BranchPolicy::asinh: return Branch::asinh;
        case BranchPolicy::automatic:
            return min_li2_argument(p, kind) >= opts.asinh_min_argument ? Branch::asinh : Branch::li2;
    }
    return Branch::li2;
}

IslandValue evaluate_island(const IslandParams& p, IslandKind kind, const EngineOptions& opts) {
    const Branch b = select_branch(p, kind, opts);
    switch (b) {
        case Branch::degenerate: return {i_degenerate(p), b};
        case Branch::asinh: return {kind == IslandKind::sci ? i_cut_asinh(p) : i_xci_asinh(p), b};
        case Branch::li2: break;
    }
    return {kind == IslandKind::sci ? i_cut_li2(p) : i_xci_li2(p), Branch::li2};
}

SpanNli span_nli_psd(const Span& span, const EngineOptions& opts) {
    const auto& comb = span.comb;
    const Channel& cut = comb.cut();
    SpanNli out;
    out.islands.reserve(comb.channels.size());

    double xci_sum = 0.0;
    double sci_term = 0.0;
    for (std::size_t n = 0; n < comb.channels.size(); ++n) {
        const bool is_cut = n == comb.cut_index;
        IslandValue v;
        try {
            v = evaluate_island(island_params(span, n), is_cut ? IslandKind::sci : IslandKind::xci, opts);
        } catch (const ComputationError& e) {
            throw ComputationError("channel " + std::to_string(n + 1) + (is_cut ? " (SCI island): " : " (XCI island): ") +
                                   e.what());
        }
        out.islands.push_back({n, v.branch, v.value});
        const double g = comb.channels[n].psd;
        if (is_cut)
            sci_term = g * g * v.value;
        else
            xci_sum += g * g * 2.0 * v.value;
    }
    const double gamma = span.fiber.gamma;
    out.psd = 16.0 / 27.0 * gamma * gamma * span_power_transfer(span, cut.center) * cut.psd * (xci_sum + sci_term);
    return out;
}

NliReport link_nli_psd(const Link& link, const EngineOptions& opts) {
    require_valid(link);
    const Channel& cut = link.cut();
    NliReport report;
    report.cut_frequency = cut.center;
    report.cut_bandwidth = cut.bandwidth;

    // Neumaier summation over spans.
    double sum = 0.0;
    double compensation = 0.0;
    const std::size_t n_spans = link.spans.size();
    for (std::size_t s = 0; s < n_spans; ++s) {
        SpanNli span_nli;
        try {
            span_nli = span_nli_psd(link.spans[s], opts);
        } catch (const ComputationError& e) {
            throw ComputationError("span " + std::to_string(s + 1) + ", " + e.what());
        }
        const double transfer = link_transfer(link, cut.center, s + 1, n_spans);
        const double term = span_nli.psd * transfer;
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            compensation += (sum - t) + term;
        else
            compensation += (term - t) + sum;
        sum = t;
        report.per_span.push_back({s, span_nli.psd, transfer, std::move(span_nli.islands)});
    }
    report.nli_psd_end = sum + compensation;
    return report;
}

double gsnr(const NliReport& report, double cut_power, double ase_power) {
    if (!(cut_power > 0.0)) throw std::invalid_argument("gsnr: CUT power must be positive");
    if (!(ase_power >= 0.0)) throw std::invalid_argument("gsnr: ASE power must be non-negative");
    const double noise = ase_power + report.nli_power_end();
    if (!(noise > 0.0)) throw ComputationError("gsnr: zero noise power");
    return cut_power / noise;
}

}  // namespace nli
