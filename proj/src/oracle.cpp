#include "nli/oracle.hpp"

#include "nli/error.hpp"
#include "nli/link_physics.hpp"
#include "nli/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nli {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
// exp(-40) is below double resolution relative to the retained part.
constexpr double kDecayLengths = 40.0;

struct Spatial {
    double phase_rate;
    std::vector<LossTerm> terms;
    double a0_total;

    // exp(-sum alpha1 (1 - exp(-sigma z)) / sigma), the non-exponential part of the integrand.
    template <class Z>
    Z srs_factor(Z z) const {
        Z h{};
        for (const auto& t : terms) {
            if (t.alpha1 == 0.0) continue;
            h += t.alpha1 * (Z(1.0) - std::exp(-t.sigma * z)) / t.sigma;
        }
        return std::exp(-h);
    }

    bool has_srs() const {
        return std::any_of(terms.begin(), terms.end(), [](const LossTerm& t) { return t.alpha1 != 0.0; });
    }
};

[[noreturn]] void quadrature_failed(const std::string& what, cplx value, double error) {
    throw QuadratureError(what + ": tolerance not reached", std::abs(value), error);
}

// d exp(-lambda z0) integral_0^inf exp(-|lambda| t) g(z0 + t d) dt with d = conj(lambda)/|lambda|.
cplx ray(const Spatial& s, cplx lambda, double z0, double rel_tol, std::size_t max_sub) {
    const double mag = std::abs(lambda);
    const cplx d = std::conj(lambda) / mag;
    auto integrand = [&](double t) { return std::exp(-mag * t) * s.srs_factor(cplx(z0) + t * d); };
    quad::Options opt;
    opt.rel_tol = rel_tol;
    opt.max_intervals = max_sub;
    const auto r = quad::integrate(integrand, 0.0, kDecayLengths / mag, opt);
    if (!r.converged) quadrature_failed("spatial integral (contour)", r.value, r.abs_error);
    return d * std::exp(-lambda * z0) * r.value;
}

cplx direct(const Spatial& s, double upper, double rel_tol, std::size_t max_sub) {
    const cplx jw(0.0, s.phase_rate);
    auto integrand = [&](double z) { return std::exp((jw - s.a0_total) * z) * s.srs_factor(z); };
    quad::Options opt;
    opt.rel_tol = rel_tol;
    std::size_t panels = 1;
    if (s.phase_rate != 0.0) {
        opt.max_panel_width = kPi / (4.0 * std::abs(s.phase_rate));
        panels = static_cast<std::size_t>(std::ceil(upper / opt.max_panel_width));
    }
    opt.max_intervals = panels + max_sub;
    const auto r = quad::integrate(integrand, 0.0, upper, opt);
    if (!r.converged) quadrature_failed("spatial integral (real axis)", r.value, r.abs_error);
    return r.value;
}

cplx spatial(const Spatial& s, double length, SpatialMethod method, double rel_tol, std::size_t max_sub) {
    const bool infinite = std::isinf(length);
    if (infinite && !(s.a0_total > 0.0))
        throw ComputationError("spatial integral diverges: net loss mismatch is not positive");
    const cplx lambda(s.a0_total, -s.phase_rate);

    if (!s.has_srs()) {
        // Pure exponential: exact.
        if (infinite) return 1.0 / lambda;
        if (lambda == cplx(0.0)) return length;
        // 1 - exp(-lambda L) split so neither part cancels for small arguments.
        const double theta = s.phase_rate * length;
        const cplx one_minus_phase = cplx(0.0, -2.0 * std::sin(0.5 * theta)) * std::polar(1.0, 0.5 * theta);
        return (-std::expm1(-s.a0_total * length) + std::exp(-s.a0_total * length) * one_minus_phase) / lambda;
    }

    const bool contour_ok = method == SpatialMethod::contour && s.a0_total > 0.0 &&
                            (infinite || s.a0_total * length >= 0.5);
    if (!contour_ok) return direct(s, infinite ? kDecayLengths / s.a0_total : length, rel_tol, max_sub);
    const cplx head = ray(s, lambda, 0.0, rel_tol, max_sub);
    if (infinite) return head;
    return head - ray(s, lambda, length, rel_tol, max_sub);
}

double spatial_tolerance(const QuadratureConfig& cfg) {
    return std::max(cfg.rel_tol * 1e-2, 1e-14);
}

double rational_kernel(const IslandParams& p, double u) {
    const double x = p.big_b * u;
    const double a = 2.0 * p.alpha0;
    const double c = 2.0 * p.alpha0 + p.sigma;
    const double d = 2.0 * p.alpha0 - 2.0 * p.alpha1 + p.sigma;
    return (d * d + x * x) / ((a * a + x * x) * (c * c + x * x));
}

double matched_kernel(const IslandParams& p, double u, double length, const QuadratureConfig& cfg,
                      SpatialMethod method) {
    const Spatial s{p.big_b * u, {{2.0 * p.alpha0, 2.0 * p.alpha1, p.sigma}}, 2.0 * p.alpha0};
    return std::norm(spatial(s, length, method, spatial_tolerance(cfg), cfg.max_subdivisions));
}

LossTerm interpolated_term(const LossModel& loss, double f, double sign) {
    return {sign * loss.alpha0.interpolate(f), sign * loss.alpha1.interpolate(f), loss.sigma.interpolate(f)};
}

double full_kernel(const Span& span, double f_cut, double f1, double f2, const QuadratureConfig& cfg,
                   const TierOptions& opts) {
    const auto& fiber = span.fiber;
    const double f3 = f1 + f2 - f_cut;
    const double delta_beta = -4.0 * kPi * kPi * (f_cut - f1) * (f_cut - f2) *
                              (fiber.beta2 + kPi * fiber.beta3 * (f1 + f2 - 2.0 * fiber.f_c));
    Spatial s{-delta_beta, {}, 0.0};
    s.terms.push_back(interpolated_term(span.loss, f1, 1.0));
    s.terms.push_back(interpolated_term(span.loss, f2, 1.0));
    s.terms.push_back(interpolated_term(span.loss, f3, 1.0));
    LossTerm cut = interpolated_term(span.loss, f_cut, -1.0);
    if (opts.delta_alpha == DeltaAlphaReading::as_printed) cut.alpha1 = -cut.alpha1;
    s.terms.push_back(cut);
    for (const auto& t : s.terms) s.a0_total += t.alpha0;
    return std::norm(spatial(s, fiber.length, opts.spatial, spatial_tolerance(cfg), cfg.max_subdivisions));
}

// exp(-2 integral_0^L alpha(f_CUT, z) dz) from interpolated loss values.
double outer_factor_interpolated(const Span& span, double f) {
    const double a0 = span.loss.alpha0.interpolate(f);
    const double a1 = span.loss.alpha1.interpolate(f);
    const double sg = span.loss.sigma.interpolate(f);
    const double L = span.fiber.length;
    return std::exp(-2.0 * a0 * L + 2.0 * a1 * std::expm1(-sg * L) / sg);
}

std::size_t nearest_channel(const WdmComb& comb, double f) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < comb.channels.size(); ++n)
        if (std::abs(comb.channels[n].center - f) < std::abs(comb.channels[best].center - f)) best = n;
    return best;
}

// The island an (f1, f2) pair belongs to: the channel holding the partner of whichever
// frequency sits in the CUT band, otherwise the channel nearest the idler.
std::size_t interferer(const WdmComb& comb, double f1, double f2) {
    const Channel& cut = comb.cut();
    const auto in_cut = [&](double f) { return std::abs(f - cut.center) <= 0.5 * cut.bandwidth; };
    if (in_cut(f1)) return nearest_channel(comb, f2);
    if (in_cut(f2)) return nearest_channel(comb, f1);
    return nearest_channel(comb, f1 + f2 - cut.center);
}

template <class Kernel>
double integrate_island(const IslandParams& p, const QuadratureConfig& cfg, Kernel kernel) {
    quad::Options inner;
    inner.rel_tol = cfg.rel_tol * 0.05;
    inner.max_intervals = cfg.max_subdivisions;
    quad::Options outer = inner;
    outer.rel_tol = cfg.rel_tol * 0.5;

    double worst_inner = 0.0;
    bool inner_ok = true;
    auto over_f1 = [&](double f2p) {
        const auto r = quad::integrate([&](double f1p) { return kernel(f1p, f2p); }, -0.5 * p.b_cut, 0.5 * p.b_cut,
                                       inner);
        if (!r.converged) {
            inner_ok = false;
            worst_inner = std::max(worst_inner, r.abs_error);
        }
        return r.value;
    };
    const double lo = p.f_offset - 0.5 * p.b_nch;
    const double hi = p.f_offset + 0.5 * p.b_nch;
    const auto r = quad::integrate(over_f1, lo, hi, outer);
    if (!inner_ok)
        throw QuadratureError("island quadrature: inner integral did not converge", r.value, worst_inner * p.b_nch);
    if (!r.converged) throw QuadratureError("island quadrature: tolerance not reached", r.value, r.abs_error);
    return r.value;
}

}  // namespace

const char* to_string(OracleTier t) noexcept {
    switch (t) {
        case OracleTier::rational: return "rational";
        case OracleTier::matched: return "matched";
        case OracleTier::full: return "full";
    }
    return "?";
}

std::complex<double> spatial_integral(double phase_rate, std::span<const LossTerm> terms, double length,
                                      SpatialMethod method, double rel_tol, std::size_t max_subdivisions) {
    Spatial s{phase_rate, {terms.begin(), terms.end()}, 0.0};
    for (const auto& t : s.terms) s.a0_total += t.alpha0;
    return spatial(s, length, method, rel_tol, max_subdivisions);
}

double rho_sq(double f1, double f2, const Span& span, OracleTier tier, const QuadratureConfig& cfg,
              const TierOptions& opts) {
    const double f_cut = span.comb.cut().center;
    if (tier == OracleTier::full)
        return outer_factor_interpolated(span, f_cut) * full_kernel(span, f_cut, f1, f2, cfg, opts);

    const IslandParams p = island_params(span, interferer(span.comb, f1, f2));
    const double u = (f1 - f_cut) * (f2 - f_cut);
    const double outer = fiber_power_transfer(span, f_cut);
    if (tier == OracleTier::rational) return outer * rational_kernel(p, u);
    const double length = opts.matched_finite_length ? span.fiber.length : std::numeric_limits<double>::infinity();
    return outer * matched_kernel(p, u, length, cfg, opts.spatial);
}

double island_quadrature(const IslandParams& p, OracleTier tier, const QuadratureConfig& cfg) {
    switch (tier) {
        case OracleTier::rational:
            return integrate_island(p, cfg, [&](double f1p, double f2p) { return rational_kernel(p, f1p * f2p); });
        case OracleTier::matched: {
            const double inf = std::numeric_limits<double>::infinity();
            return integrate_island(p, cfg, [&](double f1p, double f2p) {
                return matched_kernel(p, f1p * f2p, inf, cfg, SpatialMethod::contour);
            });
        }
        case OracleTier::full: break;
    }
    throw std::invalid_argument("island_quadrature: the full tier needs the span");
}

double island_quadrature(const IslandParams& p, const Span& span, OracleTier tier, const QuadratureConfig& cfg,
                         const TierOptions& opts) {
    switch (tier) {
        case OracleTier::rational: return island_quadrature(p, tier, cfg);
        case OracleTier::matched: {
            const double length =
                opts.matched_finite_length ? span.fiber.length : std::numeric_limits<double>::infinity();
            return integrate_island(p, cfg, [&](double f1p, double f2p) {
                return matched_kernel(p, f1p * f2p, length, cfg, opts.spatial);
            });
        }
        case OracleTier::full: {
            const double f_cut = span.comb.cut().center;
            return integrate_island(p, cfg, [&](double f1p, double f2p) {
                return full_kernel(span, f_cut, f_cut + f1p, f_cut + f2p, cfg, opts);
            });
        }
    }
    return 0.0;
}

SpanQuadrature span_nli_quadrature(const Span& span, OracleTier tier, const QuadratureConfig& cfg,
                                   const TierOptions& opts) {
    const auto& comb = span.comb;
    const Channel& cut = comb.cut();
    SpanQuadrature out;
    double xci_sum = 0.0;
    double sci_term = 0.0;
    for (std::size_t n = 0; n < comb.channels.size(); ++n) {
        const bool is_cut = n == comb.cut_index;
        double value = 0.0;
        try {
            value = island_quadrature(island_params(span, n), span, tier, cfg, opts);
        } catch (const QuadratureError& e) {
            throw QuadratureError("channel " + std::to_string(n + 1) + ": " + e.what(), e.value(), e.error_estimate());
        }
        out.islands.push_back({n, Branch::li2, value});
        const double g = comb.channels[n].psd;
        if (is_cut)
            sci_term = g * g * value;
        else
            xci_sum += g * g * 2.0 * value;
    }
    const double gamma = span.fiber.gamma;
    out.psd = 16.0 / 27.0 * gamma * gamma * span_power_transfer(span, cut.center) * cut.psd * (xci_sum + sci_term);
    return out;
}

}  // namespace nli
