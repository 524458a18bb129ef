#pragma once

// Closed-form per-span NLI integrals and end-of-link incoherent accumulation.

#include "nli/model.hpp"

#include <cstddef>
#include <vector>

namespace nli {

/// Everything one integration island needs. Loss values are sampled at the interfering
/// channel's centre (at the CUT for the SCI island).
struct IslandParams {
    double alpha0 = 0.0;    // 1/m
    double alpha1 = 0.0;    // 1/m
    double sigma = 0.0;     // 1/m
    double big_b = 0.0;     // 4 pi^2 beta2_eff, s^2/m
    double f_offset = 0.0;  // f_nch - f_CUT, Hz
    double b_nch = 0.0;     // Hz
    double b_cut = 0.0;     // Hz
};

/// Island of channel `channel` in `span` (the SCI island when channel is the CUT).
[[nodiscard]] IslandParams island_params(const Span& span, std::size_t channel);

// Closed forms of the island integral of
//   ((2a0 - 2a1 + s)^2 + (f1 f2 B)^2) / ((4 a0^2 + (f1 f2 B)^2) ((2a0 + s)^2 + (f1 f2 B)^2))
// All return m^2 Hz^2 and throw ComputationError when |alpha1| >= alpha0, sigma <= 0,
// alpha0 <= 0, or (li2/asinh forms only) big_b == 0.

[[nodiscard]] double i_xci_li2(const IslandParams& p);
[[nodiscard]] double i_xci_asinh(const IslandParams& p);
[[nodiscard]] double i_cut_li2(const IslandParams& p);
[[nodiscard]] double i_cut_asinh(const IslandParams& p);
/// big_b -> 0 limit: (B_CUT B_nch / 4 a0^2) (2a0 - 2a1 + s)^2 / (2a0 + s)^2.
[[nodiscard]] double i_degenerate(const IslandParams& p);

enum class BranchPolicy { automatic, li2, asinh };

struct EngineOptions {
    BranchPolicy policy = BranchPolicy::automatic;
    /// Islands whose dispatch_argument falls below this use i_degenerate (in every policy).
    double degenerate_threshold = 1e-3;
    /// Under the automatic policy, asinh is used only when every Li2 argument is at least this.
    double asinh_min_argument = 10.0;
};

enum class IslandKind { xci, sci };

/// Half the largest Li2 argument of the island, |B| * extent^2 / (16 a0) for the SCI square.
[[nodiscard]] double dispatch_argument(const IslandParams& p, IslandKind kind);
/// Smallest magnitude among all Li2 arguments of the island.
[[nodiscard]] double min_li2_argument(const IslandParams& p, IslandKind kind);

[[nodiscard]] Branch select_branch(const IslandParams& p, IslandKind kind, const EngineOptions& opts);

struct IslandValue {
    double value;
    Branch branch;
};

[[nodiscard]] IslandValue evaluate_island(const IslandParams& p, IslandKind kind, const EngineOptions& opts = {});

struct SpanNli {
    double psd = 0.0;  // W/Hz at the end of the span, at f_CUT
    std::vector<IslandRecord> islands;
};

/// Per-span NLI PSD at the CUT centre: XCI islands (counted twice) plus the SCI island.
[[nodiscard]] SpanNli span_nli_psd(const Span& span, const EngineOptions& opts = {});

/// Incoherent sum of every span's NLI, each propagated to the link end.
/// Validates the link first (throws ValidationError).
[[nodiscard]] NliReport link_nli_psd(const Link& link, const EngineOptions& opts = {});

/// cut_power / (ase_power + nli_psd_end * B_CUT). Throws ComputationError on a zero
/// denominator and std::invalid_argument on a non-positive cut power or negative ASE.
[[nodiscard]] double gsnr(const NliReport& report, double cut_power, double ase_power);

}  // namespace nli
