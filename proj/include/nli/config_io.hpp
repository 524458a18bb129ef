#pragma once

// Link-description files (YAML) and CSV reports.
//
// A link file carries every quantity in conventional units, with the unit in the key:
//
//   version: nli-spec/1
//   name: example
//   srs_fit: {raman_slope_per_W_km_THz: 0.028, sigma_policy: uniform, scope: span}
//   comb:
//     channels:
//       - {center_THz: 193.4, bandwidth_GHz: 64, power_dBm: 0}
//     cut: 0                      # index, or {center_THz: 193.4}
//   spans:
//     - length_km: 80
//       fiber: smf                # or {gamma_per_W_km, beta2_ps2_km, beta3_ps3_km, fc_THz}
//       loss: {alpha0_dB_km: 0.2, srs: fit}
//       lumped_gain: transparent  # or {gain_dB: 16} or {gain_dB: [{f_THz, dB}, ...]}
//       comb: inherit             # omitted: top-level comb; or an inline {channels, cut}

#include "nli/link_physics.hpp"
#include "nli/model.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nli {

inline constexpr std::string_view kSpecVersion = "nli-spec/1";

struct FiberProfile {
    std::string_view name;
    double gamma_per_W_km;
    double beta2_ps2_km;
    double beta3_ps3_km;
    double fc_THz;
};

/// Named fiber profiles accepted in place of an explicit fiber map.
[[nodiscard]] std::span<const FiberProfile> fiber_profiles() noexcept;

enum class SrsFitScope { span, link };

struct LinkDocument {
    std::string name;
    Link link;
    std::optional<SrsFitConfig> srs_fit;
    SrsFitScope srs_scope = SrsFitScope::span;
};

struct ParseOptions {
    /// Run validate_link on the result and throw ValidationError on violations.
    bool validate = true;
};

/// Throws ParseError (with 1-based line and column when known) on malformed input and
/// ValidationError when opts.validate is set and the link breaks an invariant.
[[nodiscard]] LinkDocument parse_link_document(std::string_view text, const ParseOptions& opts = {});
[[nodiscard]] Link parse_link_spec(std::string_view text, const ParseOptions& opts = {});
/// Reads and parses a file. An unreadable file is a ParseError.
[[nodiscard]] LinkDocument load_link_document(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Writes a document that parses back to `link` (17 significant digits, every span's
/// comb and loss tables inline).
[[nodiscard]] std::string serialize_link_spec(const Link& link, std::string_view name = "");

/// CSV with header
///   cut_frequency_THz,nli_psd_end_W_per_Hz,nli_power_dBm,gsnr_dB,spans,branch_summary
/// one row per report, ordered by CUT frequency, 9 significant digits.
[[nodiscard]] std::string emit_report_csv(std::span<const NliReport> reports);

struct ReportRow {
    double cut_frequency_THz = 0.0;
    double nli_psd_end_W_per_Hz = 0.0;
    double nli_power_dBm = 0.0;
    std::optional<double> gsnr_dB;
    std::size_t spans = 0;
    std::string branch_summary;
};

/// Inverse of emit_report_csv. Throws ParseError on a malformed table.
[[nodiscard]] std::vector<ReportRow> parse_report_csv(std::string_view text);

/// "li2:N;asinh:N;degenerate:N" over every island of every span.
[[nodiscard]] std::string branch_summary(const NliReport& report);

}  // namespace nli
