#pragma once

// Quadrature reference implementations of the per-span NLI integral at three levels of
// approximation:
//
//   rational  first-order-in-alpha1 rational integrand of f1' f2' (what the closed forms integrate)
//   matched   exact spatial integral with the per-channel sampled dispersion and loss,
//             integrated to infinity
//   full      exact four-frequency phase and loss mismatch, finite span length, loss
//             tables interpolated linearly between samples

#include "nli/engine.hpp"
#include "nli/model.hpp"

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace nli {

enum class OracleTier { rational, matched, full };

[[nodiscard]] const char* to_string(OracleTier t) noexcept;

struct QuadratureConfig {
    double rel_tol = 1e-9;
    std::size_t max_subdivisions = 4000;  // intervals per 1-D integral
};

/// The loss-mismatch term -alpha(f,z) appears with inconsistent signs in the source
/// derivation. `consistent` follows the kappa combination (the alpha1 term of the CUT
/// frequency is subtracted together with its alpha0); `as_printed` adds it.
enum class DeltaAlphaReading { consistent, as_printed };

/// contour: steepest-descent rays in the complex z plane (exact by Cauchy's theorem, the
/// integrand is entire). direct: real-axis panels no wider than pi / (4 |phase rate|).
enum class SpatialMethod { contour, direct };

struct TierOptions {
    DeltaAlphaReading delta_alpha = DeltaAlphaReading::consistent;
    /// Matched tier only: integrate to the span length instead of infinity.
    bool matched_finite_length = false;
    SpatialMethod spatial = SpatialMethod::contour;
};

/// One loss contribution alpha0 + alpha1 exp(-sigma z) to the mismatch Delta alpha, with
/// its sign already folded into alpha0 and alpha1.
struct LossTerm {
    double alpha0;
    double alpha1;
    double sigma;
};

/// integral_0^length exp(j phase_rate z) exp(-integral_0^z Delta alpha dz') dz.
/// length may be +infinity. Throws QuadratureError when the integral does not converge
/// to the requested tolerance, ComputationError when it diverges.
[[nodiscard]] std::complex<double> spatial_integral(double phase_rate, std::span<const LossTerm> terms, double length,
                                                    SpatialMethod method, double rel_tol,
                                                    std::size_t max_subdivisions = 20000);

/// |rho(f1, f2, f_CUT)|^2 of `span` at the given tier, outer loss factor included (m^2).
[[nodiscard]] double rho_sq(double f1, double f2, const Span& span, OracleTier tier, const QuadratureConfig& cfg = {},
                            const TierOptions& opts = {});

/// 2-D quadrature of the tier integrand (without the outer loss factor) over the island
/// f1' in [-B_CUT/2, B_CUT/2], f2' in [f_offset - B_nch/2, f_offset + B_nch/2]. Comparable
/// to the closed-form island integrals. The full tier and the finite-length matched tier
/// need the span; this overload rejects them.
[[nodiscard]] double island_quadrature(const IslandParams& p, OracleTier tier, const QuadratureConfig& cfg = {});

[[nodiscard]] double island_quadrature(const IslandParams& p, const Span& span, OracleTier tier,
                                       const QuadratureConfig& cfg = {}, const TierOptions& opts = {});

struct SpanQuadrature {
    double psd = 0.0;                  // W/Hz
    std::vector<IslandRecord> islands; // branch field unused; integral holds the oracle value
};

/// Per-span NLI PSD assembled from oracle island integrals with the same island
/// decomposition as span_nli_psd.
[[nodiscard]] SpanQuadrature span_nli_quadrature(const Span& span, OracleTier tier, const QuadratureConfig& cfg = {},
                                                 const TierOptions& opts = {});

}  // namespace nli
