#pragma once

// Domain data model. Every quantity is stored in SI base units:
// Hz, m, 1/m, s^2/m, s^3/m, 1/(W m), W/Hz.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nli {

/// Converts a power attenuation in dB/km into the field-loss coefficient in 1/m
/// (power decays as exp(-2 alpha z)). Negative input describes distributed gain.
[[nodiscard]] double db_per_km_to_field_alpha(double db_per_km) noexcept;

/// Inverse of db_per_km_to_field_alpha.
[[nodiscard]] double field_alpha_to_db_per_km(double alpha_per_m) noexcept;

/// Sorted (frequency, value) samples of a per-frequency quantity.
///
/// The closed form only ever needs values at channel centres and uses nearest(); the
/// full-tier oracle needs values anywhere and uses interpolate().
class FrequencyTable {
public:
    struct Sample {
        double frequency;
        double value;
    };

    FrequencyTable() = default;

    /// Throws std::invalid_argument when empty, unsorted, or non-finite.
    explicit FrequencyTable(std::vector<Sample> samples);

    [[nodiscard]] static FrequencyTable constant(double value);

    [[nodiscard]] double nearest(double frequency) const;
    /// Linear interpolation, clamped to the end values outside the table.
    [[nodiscard]] double interpolate(double frequency) const;

    [[nodiscard]] std::span<const Sample> samples() const noexcept { return samples_; }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }

    friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

private:
    std::vector<Sample> samples_;
};

inline bool operator==(const FrequencyTable::Sample& a, const FrequencyTable::Sample& b) {
    return a.frequency == b.frequency && a.value == b.value;
}

struct FiberParams {
    double gamma = 0.0;   // 1/(W m)
    double beta2 = 0.0;   // s^2/m at f_c
    double beta3 = 0.0;   // s^3/m at f_c
    double f_c = 0.0;     // Hz
    double length = 0.0;  // m
};

/// alpha(f, z) = alpha0(f) + alpha1(f) exp(-sigma(f) z), field convention.
struct LossModel {
    FrequencyTable alpha0;
    FrequencyTable alpha1;
    FrequencyTable sigma;

    [[nodiscard]] double alpha0_at(double f) const { return alpha0.nearest(f); }
    [[nodiscard]] double alpha1_at(double f) const { return alpha1.nearest(f); }
    [[nodiscard]] double sigma_at(double f) const { return sigma.nearest(f); }
};

struct Channel {
    double center = 0.0;     // Hz
    double bandwidth = 0.0;  // Hz
    double psd = 0.0;        // W/Hz at span input

    [[nodiscard]] double power() const noexcept { return psd * bandwidth; }
};

struct WdmComb {
    std::vector<Channel> channels;
    std::size_t cut_index = 0;

    [[nodiscard]] const Channel& cut() const { return channels.at(cut_index); }
    /// Index of the channel whose centre lies within `tolerance` Hz of `center`.
    [[nodiscard]] std::optional<std::size_t> find(double center, double tolerance = 1.0e3) const;
};

/// End-of-span lumped gain: either an explicit table, or "transparent", i.e. the exact
/// reciprocal of the fiber's power transfer at every channel.
class LumpedGain {
public:
    LumpedGain() = default;

    [[nodiscard]] static LumpedGain transparent() { return LumpedGain{}; }
    [[nodiscard]] static LumpedGain table(FrequencyTable gains);

    [[nodiscard]] bool is_transparent() const noexcept { return !table_.has_value(); }
    /// Precondition: !is_transparent().
    [[nodiscard]] const FrequencyTable& gains() const { return table_.value(); }

private:
    std::optional<FrequencyTable> table_;
};

struct Span {
    FiberParams fiber;
    LossModel loss;
    LumpedGain lumped_gain;
    WdmComb comb;
};

struct Link {
    std::vector<Span> spans;

    [[nodiscard]] std::size_t size() const noexcept { return spans.size(); }
    [[nodiscard]] const Channel& cut() const { return spans.front().comb.cut(); }
};

/// Which closed-form expression produced an island integral.
enum class Branch { li2, asinh, degenerate };

[[nodiscard]] const char* to_string(Branch b) noexcept;

struct IslandRecord {
    std::size_t channel = 0;  // index into the span's comb
    Branch branch = Branch::li2;
    double integral = 0.0;    // I_nch or I_CUT, m^2 Hz^2
};

struct SpanContribution {
    std::size_t span = 0;            // 0-based
    double nli_psd = 0.0;            // W/Hz at the end of this span
    double transfer_to_end = 1.0;    // power transfer from this span's output to the link end
    std::vector<IslandRecord> islands;
};

struct NliReport {
    double cut_frequency = 0.0;  // Hz
    double cut_bandwidth = 0.0;  // Hz
    double nli_psd_end = 0.0;    // W/Hz
    std::vector<SpanContribution> per_span;
    std::optional<double> gsnr;

    [[nodiscard]] double nli_power_end() const noexcept { return nli_psd_end * cut_bandwidth; }
};

enum class ViolationKind {
    empty_link,
    fiber_parameter,
    channel_parameter,
    cut_index,
    channel_overlap,
    cut_frequency_mismatch,
    cut_bandwidth_mismatch,
    loss_parameter,
    sigma_not_positive,
    perturbative_regime,
};

struct Violation {
    ViolationKind kind;
    std::size_t span;     // 0-based
    std::size_t channel;  // 0-based, meaningful for per-channel violations
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    [[nodiscard]] std::vector<std::string> messages() const;
};

/// Checks every structural invariant the closed form relies on. Never throws on bad
/// data; violations are returned.
[[nodiscard]] ValidationResult validate_link(const Link& link);

/// Throws ValidationError when validate_link reports violations.
void require_valid(const Link& link);

}  // namespace nli
