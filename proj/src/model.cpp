#include "nli/model.hpp"

#include "nli/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nli {

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
          std::string text = "link validation failed";
          for (const auto& v : violations) text += "\n  " + v;
          return text;
      }()),
      violations_(std::move(violations)) {}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                     : message),
      line_(line),
      column_(column) {}

double db_per_km_to_field_alpha(double db_per_km) noexcept {
    return db_per_km * std::numbers::ln10 / 20.0 / 1000.0;
}

double field_alpha_to_db_per_km(double alpha_per_m) noexcept {
    return alpha_per_m * 1000.0 * 20.0 / std::numbers::ln10;
}

FrequencyTable::FrequencyTable(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("frequency table is empty");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i].frequency) || !std::isfinite(samples_[i].value))
            throw std::invalid_argument("frequency table holds a non-finite entry");
        if (i > 0 && !(samples_[i].frequency > samples_[i - 1].frequency))
            throw std::invalid_argument("frequency table is not strictly increasing in frequency");
    }
}

FrequencyTable FrequencyTable::constant(double value) {
    return FrequencyTable({{0.0, value}});
}

double FrequencyTable::nearest(double frequency) const {
    if (samples_.empty()) throw std::logic_error("lookup in an empty frequency table");
    auto it = std::lower_bound(samples_.begin(), samples_.end(), frequency,
                               [](const Sample& s, double f) { return s.frequency < f; });
    if (it == samples_.begin()) return it->value;
    if (it == samples_.end()) return samples_.back().value;
    const auto prev = std::prev(it);
    return (frequency - prev->frequency) <= (it->frequency - frequency) ? prev->value : it->value;
}

double FrequencyTable::interpolate(double frequency) const {
    if (samples_.empty()) throw std::logic_error("lookup in an empty frequency table");
    if (frequency <= samples_.front().frequency) return samples_.front().value;
    if (frequency >= samples_.back().frequency) return samples_.back().value;
    auto it = std::upper_bound(samples_.begin(), samples_.end(), frequency,
                               [](double f, const Sample& s) { return f < s.frequency; });
    const auto prev = std::prev(it);
    const double t = (frequency - prev->frequency) / (it->frequency - prev->frequency);
    return prev->value + t * (it->value - prev->value);
}

std::optional<std::size_t> WdmComb::find(double center, double tolerance) const {
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (std::abs(channels[i].center - center) <= tolerance) return i;
    return std::nullopt;
}

LumpedGain LumpedGain::table(FrequencyTable gains) {
    LumpedGain g;
    g.table_ = std::move(gains);
    return g;
}

const char* to_string(Branch b) noexcept {
    switch (b) {
        case Branch::li2: return "li2";
        case Branch::asinh: return "asinh";
        case Branch::degenerate: return "degenerate";
    }
    return "?";
}

std::vector<std::string> ValidationResult::messages() const {
    std::vector<std::string> out;
    out.reserve(violations.size());
    for (const auto& v : violations) out.push_back(v.message);
    return out;
}

namespace {

std::string where(std::size_t span) {
    return "span " + std::to_string(span + 1) + ": ";
}

std::string where(std::size_t span, std::size_t channel) {
    return "span " + std::to_string(span + 1) + ", channel " + std::to_string(channel + 1) + ": ";
}

void check_span(const Span& s, std::size_t si, std::vector<Violation>& out) {
    const auto& fb = s.fiber;
    auto bad_fiber = [&](const std::string& what) {
        out.push_back({ViolationKind::fiber_parameter, si, 0, where(si) + what});
    };
    if (!(fb.gamma >= 0.0) || !std::isfinite(fb.gamma)) bad_fiber("gamma must be finite and non-negative");
    if (!(fb.length > 0.0) || !std::isfinite(fb.length)) bad_fiber("span length must be positive");
    if (!(fb.f_c > 0.0) || !std::isfinite(fb.f_c)) bad_fiber("dispersion centre frequency must be positive");
    if (!std::isfinite(fb.beta2) || !std::isfinite(fb.beta3)) bad_fiber("dispersion coefficients must be finite");

    if (s.loss.alpha0.empty() || s.loss.alpha1.empty() || s.loss.sigma.empty()) {
        out.push_back({ViolationKind::loss_parameter, si, 0, where(si) + "loss model is incomplete"});
        return;
    }
    if (!s.lumped_gain.is_transparent()) {
        for (const auto& g : s.lumped_gain.gains().samples())
            if (!(g.value >= 0.0)) {
                out.push_back({ViolationKind::loss_parameter, si, 0, where(si) + "lumped gain must be non-negative"});
                break;
            }
    }

    const auto& ch = s.comb.channels;
    if (ch.empty() || s.comb.cut_index >= ch.size()) {
        out.push_back({ViolationKind::cut_index, si, s.comb.cut_index, where(si) + "CUT index out of range"});
    }
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const auto& c = ch[i];
        if (!(c.bandwidth > 0.0) || !(c.psd >= 0.0) || !(c.center > c.bandwidth / 2.0) || !std::isfinite(c.center) ||
            !std::isfinite(c.psd))
            out.push_back({ViolationKind::channel_parameter, si, i,
                           where(si, i) + "channel needs bandwidth > 0, psd >= 0, centre > bandwidth/2"});
    }
    for (std::size_t i = 0; i < ch.size(); ++i)
        for (std::size_t j = i + 1; j < ch.size(); ++j)
            if (std::abs(ch[i].center - ch[j].center) < 0.5 * (ch[i].bandwidth + ch[j].bandwidth))
                out.push_back({ViolationKind::channel_overlap, si, j,
                               where(si, j) + "channels overlap (with channel " + std::to_string(i + 1) + ")"});

    for (std::size_t i = 0; i < ch.size(); ++i) {
        const double f = ch[i].center;
        const double a0 = s.loss.alpha0_at(f);
        const double a1 = s.loss.alpha1_at(f);
        const double sg = s.loss.sigma_at(f);
        if (!(a0 > 0.0))
            out.push_back({ViolationKind::loss_parameter, si, i, where(si, i) + "alpha0 must be positive"});
        if (!(sg > 0.0))
            out.push_back({ViolationKind::sigma_not_positive, si, i, where(si, i) + "sigma must be positive"});
        if (!(std::abs(a1) < a0))
            out.push_back({ViolationKind::perturbative_regime, si, i,
                           where(si, i) + "perturbative regime violated (|alpha1| >= alpha0)"});
    }
}

}  // namespace

ValidationResult validate_link(const Link& link) {
    ValidationResult result;
    auto& out = result.violations;
    if (link.spans.empty()) {
        out.push_back({ViolationKind::empty_link, 0, 0, "link has no spans"});
        return result;
    }
    for (std::size_t si = 0; si < link.spans.size(); ++si) check_span(link.spans[si], si, out);

    const auto& first = link.spans.front().comb;
    if (first.cut_index >= first.channels.size()) return result;
    const Channel& cut = first.cut();
    for (std::size_t si = 1; si < link.spans.size(); ++si) {
        const auto& comb = link.spans[si].comb;
        if (comb.cut_index >= comb.channels.size()) continue;
        const Channel& c = comb.cut();
        if (c.center != cut.center)
            out.push_back({ViolationKind::cut_frequency_mismatch, si, comb.cut_index,
                           where(si) + "CUT frequency varies across spans"});
        if (c.bandwidth != cut.bandwidth)
            out.push_back({ViolationKind::cut_bandwidth_mismatch, si, comb.cut_index,
                           where(si) + "CUT bandwidth varies across spans"});
    }
    return result;
}

void require_valid(const Link& link) {
    auto result = validate_link(link);
    if (!result.ok()) throw ValidationError(result.messages());
}

}  // namespace nli
