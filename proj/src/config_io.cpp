#include "nli/config_io.hpp"

#include "nli/error.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace nli {

namespace {

constexpr double kTHz = 1e12;
constexpr double kGHz = 1e9;
constexpr double kKm = 1e3;

constexpr FiberProfile kProfiles[] = {
    {"smf", 1.3, -21.3, 0.14, 193.414},
    {"nzdsf", 1.5, -5.0, 0.1, 193.414},
    {"pscf", 0.8, -26.5, 0.15, 193.414},
};

[[noreturn]] void fail(const YAML::Node& at, const std::string& message) {
    const YAML::Mark m = at.IsDefined() ? at.Mark() : YAML::Mark::null_mark();
    if (m.is_null()) throw ParseError(message);
    throw ParseError(message, m.line + 1, m.column + 1);
}

YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& ctx) {
    if (!parent.IsMap()) fail(parent, ctx + ": expected a map");
    YAML::Node n = parent[key];
    if (!n) fail(parent, ctx + ": missing '" + key + "'");
    return n;
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed, const std::string& ctx) {
    if (!node.IsMap()) fail(node, ctx + ": expected a map");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(kv.first, ctx + ": unknown key '" + key + "'");
    }
}

double number(const YAML::Node& n, const std::string& ctx) {
    if (!n.IsScalar()) fail(n, ctx + ": expected a number");
    double v = 0.0;
    try {
        v = n.as<double>();
    } catch (const YAML::Exception&) {
        fail(n, ctx + ": expected a number");
    }
    if (!std::isfinite(v)) fail(n, ctx + ": value must be finite");
    return v;
}

std::string text(const YAML::Node& n, const std::string& ctx) {
    if (!n.IsScalar()) fail(n, ctx + ": expected a string");
    return n.as<std::string>();
}

template <class Convert>
FrequencyTable table(const YAML::Node& n, const std::string& value_key, Convert convert, const std::string& ctx) {
    if (n.IsScalar()) return FrequencyTable::constant(convert(number(n, ctx)));
    if (!n.IsSequence() || n.size() == 0) fail(n, ctx + ": expected a number or a non-empty table");
    std::vector<FrequencyTable::Sample> samples;
    for (const auto& row : n) {
        check_keys(row, {"f_THz", value_key}, ctx);
        const double f = number(require(row, "f_THz", ctx), ctx) * kTHz;
        if (!samples.empty() && !(f > samples.back().frequency))
            fail(row, ctx + ": table must be sorted by strictly increasing frequency");
        samples.push_back({f, convert(number(require(row, value_key, ctx), ctx))});
    }
    return FrequencyTable(std::move(samples));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double per_km(double v) { return v / kKm; }

FiberParams parse_fiber(const YAML::Node& n, double length, const std::string& ctx) {
    FiberParams fiber;
    fiber.length = length;
    auto apply = [&](const FiberProfile& p) {
        fiber.gamma = p.gamma_per_W_km / kKm;
        fiber.beta2 = p.beta2_ps2_km * 1e-27;
        fiber.beta3 = p.beta3_ps3_km * 1e-39;
        fiber.f_c = p.fc_THz * kTHz;
    };
    auto profile = [&](const YAML::Node& name_node) {
        const auto name = text(name_node, ctx);
        for (const auto& p : kProfiles)
            if (p.name == name) return apply(p);
        fail(name_node, ctx + ": unknown fiber profile '" + name + "'");
    };
    if (n.IsScalar()) {
        profile(n);
        return fiber;
    }
    check_keys(n, {"profile", "gamma_per_W_km", "beta2_ps2_km", "beta3_ps3_km", "fc_THz"}, ctx);
    const bool base = static_cast<bool>(n["profile"]);
    if (base) profile(n["profile"]);
    auto field = [&](const char* key, double scale, double& out) {
        if (n[key])
            out = number(n[key], ctx) * scale;
        else if (!base)
            fail(n, ctx + ": missing '" + std::string(key) + "'");
    };
    field("gamma_per_W_km", 1.0 / kKm, fiber.gamma);
    field("beta2_ps2_km", 1e-27, fiber.beta2);
    field("beta3_ps3_km", 1e-39, fiber.beta3);
    field("fc_THz", kTHz, fiber.f_c);
    return fiber;
}

Channel parse_channel(const YAML::Node& n, const std::string& ctx) {
    check_keys(n, {"center_THz", "bandwidth_GHz", "power_dBm", "psd_W_per_Hz"}, ctx);
    Channel ch;
    ch.center = number(require(n, "center_THz", ctx), ctx) * kTHz;
    ch.bandwidth = number(require(n, "bandwidth_GHz", ctx), ctx) * kGHz;
    const bool has_power = static_cast<bool>(n["power_dBm"]);
    const bool has_psd = static_cast<bool>(n["psd_W_per_Hz"]);
    if (has_power == has_psd) fail(n, ctx + ": give exactly one of power_dBm, psd_W_per_Hz");
    if (has_psd)
        ch.psd = number(n["psd_W_per_Hz"], ctx);
    else
        ch.psd = 1e-3 * db_to_linear(number(n["power_dBm"], ctx)) / ch.bandwidth;
    return ch;
}

WdmComb parse_comb(const YAML::Node& n, std::optional<double> link_cut, const std::string& ctx) {
    check_keys(n, {"channels", "cut"}, ctx);
    const YAML::Node list = require(n, "channels", ctx);
    if (!list.IsSequence() || list.size() == 0) fail(list, ctx + ": channels must be a non-empty list");
    WdmComb comb;
    for (std::size_t i = 0; i < list.size(); ++i)
        comb.channels.push_back(parse_channel(list[i], ctx + ", channel " + std::to_string(i + 1)));

    const YAML::Node cut = n["cut"];
    if (cut && cut.IsScalar()) {
        const double idx = number(cut, ctx);
        if (idx != std::floor(idx) || idx < 0.0 || idx >= static_cast<double>(comb.channels.size()))
            fail(cut, ctx + ": CUT index out of range");
        comb.cut_index = static_cast<std::size_t>(idx);
        return comb;
    }
    double f = 0.0;
    if (cut) {
        check_keys(cut, {"center_THz"}, ctx + ", cut");
        f = number(require(cut, "center_THz", ctx), ctx) * kTHz;
    } else if (link_cut) {
        f = *link_cut;
    } else {
        fail(n, ctx + ": missing 'cut'");
    }
    const auto found = comb.find(f);
    if (!found) fail(cut ? cut : n, ctx + ": CUT frequency not found");
    comb.cut_index = *found;
    return comb;
}

std::vector<double> alpha0_at_centres(const FrequencyTable& alpha0, const WdmComb& comb) {
    std::vector<double> out;
    for (const auto& ch : comb.channels) out.push_back(alpha0.nearest(ch.center));
    return out;
}

SrsFitConfig parse_srs_fit(const YAML::Node& n, SrsFitScope& scope) {
    const std::string ctx = "srs_fit";
    check_keys(n, {"raman_slope_per_W_km_THz", "sigma_policy", "scope"}, ctx);
    SrsFitConfig cfg;
    cfg.raman_slope = number(require(n, "raman_slope_per_W_km_THz", ctx), ctx) / (kKm * kTHz);
    if (const YAML::Node p = n["sigma_policy"]) {
        if (p.IsScalar()) {
            if (text(p, ctx) != "uniform") fail(p, ctx + ": sigma_policy must be 'uniform' or {sigma_per_km: table}");
        } else {
            check_keys(p, {"sigma_per_km"}, ctx + ", sigma_policy");
            cfg.sigma_policy = PerChannelSigma{table(require(p, "sigma_per_km", ctx), "per_km", per_km, ctx)};
        }
    }
    if (const YAML::Node s = n["scope"]) {
        const auto v = text(s, ctx);
        if (v == "span")
            scope = SrsFitScope::span;
        else if (v == "link")
            scope = SrsFitScope::link;
        else
            fail(s, ctx + ": scope must be 'span' or 'link'");
    }
    return cfg;
}

// Loss model when no SRS is given: alpha1 = 0 and sigma = twice the power-weighted mean alpha0.
LossModel srs_free(FrequencyTable alpha0, const WdmComb& comb) {
    double power = 0.0, weighted = 0.0, plain = 0.0;
    for (const auto& ch : comb.channels) {
        const double a = alpha0.nearest(ch.center);
        power += ch.power();
        weighted += ch.power() * a;
        plain += a;
    }
    const double mean = power > 0.0 ? weighted / power : plain / static_cast<double>(comb.channels.size());
    return {std::move(alpha0), FrequencyTable::constant(0.0), FrequencyTable::constant(2.0 * mean)};
}

struct SpanContext {
    const LinkDocument& doc;
    std::optional<LossModel> link_fit;  // scope: link, taken from span 1
};

LossModel parse_loss(const YAML::Node& n, const WdmComb& comb, SpanContext& sc, const std::string& ctx) {
    check_keys(n, {"alpha0_dB_km", "srs"}, ctx);
    FrequencyTable alpha0 = table(require(n, "alpha0_dB_km", ctx), "dB_km", db_per_km_to_field_alpha, ctx);
    const YAML::Node srs = n["srs"];
    if (!srs) return srs_free(std::move(alpha0), comb);

    if (srs.IsScalar()) {
        if (text(srs, ctx) != "fit") fail(srs, ctx + ": srs must be 'fit' or {alpha1_dB_km, sigma_per_km}");
        if (!sc.doc.srs_fit) fail(srs, ctx + ": srs: fit needs a top-level srs_fit section");
        if (sc.doc.srs_scope == SrsFitScope::link && sc.link_fit)
            return {std::move(alpha0), sc.link_fit->alpha1, sc.link_fit->sigma};
        const auto baseline = alpha0_at_centres(alpha0, comb);
        SrsFit fit;
        try {
            fit = fit_srs_params(comb, baseline, *sc.doc.srs_fit);
        } catch (const std::invalid_argument& e) {
            fail(srs, ctx + ": " + e.what());
        }
        LossModel fitted = fit.to_loss_model(comb, baseline);
        fitted.alpha0 = std::move(alpha0);
        if (sc.doc.srs_scope == SrsFitScope::link) sc.link_fit = fitted;
        return fitted;
    }
    const std::string sctx = ctx + ", srs";
    check_keys(srs, {"alpha1_dB_km", "sigma_per_km"}, sctx);
    return {std::move(alpha0), table(require(srs, "alpha1_dB_km", sctx), "dB_km", db_per_km_to_field_alpha, sctx),
            table(require(srs, "sigma_per_km", sctx), "per_km", per_km, sctx)};
}

LumpedGain parse_gain(const YAML::Node& n, const std::string& ctx) {
    if (n.IsScalar()) {
        if (text(n, ctx) != "transparent") fail(n, ctx + ": lumped_gain must be 'transparent' or {gain_dB}");
        return LumpedGain::transparent();
    }
    check_keys(n, {"gain_dB"}, ctx);
    return LumpedGain::table(table(require(n, "gain_dB", ctx), "dB", db_to_linear, ctx));
}

LinkDocument build(const YAML::Node& root) {
    if (!root.IsMap()) fail(root, "document: expected a map");
    check_keys(root, {"version", "name", "srs_fit", "comb", "spans"}, "document");
    const YAML::Node version = require(root, "version", "document");
    if (text(version, "version") != kSpecVersion)
        fail(version, "unsupported version '" + version.as<std::string>() + "', expected " + std::string(kSpecVersion));

    LinkDocument doc;
    if (root["name"]) doc.name = text(root["name"], "name");
    if (root["srs_fit"]) doc.srs_fit = parse_srs_fit(root["srs_fit"], doc.srs_scope);

    std::optional<WdmComb> default_comb;
    std::optional<double> link_cut;
    if (root["comb"]) {
        default_comb = parse_comb(root["comb"], std::nullopt, "comb");
        link_cut = default_comb->cut().center;
    }

    const YAML::Node spans = require(root, "spans", "document");
    if (!spans.IsSequence()) fail(spans, "spans: expected a list");
    SpanContext sc{doc, std::nullopt};
    for (std::size_t s = 0; s < spans.size(); ++s) {
        const YAML::Node n = spans[s];
        const std::string ctx = "span " + std::to_string(s + 1);
        check_keys(n, {"length_km", "fiber", "loss", "lumped_gain", "comb"}, ctx);

        Span span;
        const YAML::Node comb = n["comb"];
        if (!comb) {
            if (!default_comb) fail(n, ctx + ": no comb given and no top-level comb");
            span.comb = *default_comb;
        } else if (comb.IsScalar()) {
            if (text(comb, ctx) != "inherit") fail(comb, ctx + ": comb must be 'inherit' or an inline comb");
            if (s == 0) fail(comb, ctx + ": the first span cannot inherit a comb");
            span.comb = doc.link.spans.back().comb;
        } else {
            span.comb = parse_comb(comb, link_cut, ctx + ", comb");
        }
        if (!link_cut) link_cut = span.comb.cut().center;

        span.fiber = parse_fiber(require(n, "fiber", ctx), number(require(n, "length_km", ctx), ctx) * kKm,
                                 ctx + ", fiber");
        span.loss = parse_loss(require(n, "loss", ctx), span.comb, sc, ctx + ", loss");
        span.lumped_gain = parse_gain(require(n, "lumped_gain", ctx), ctx + ", lumped_gain");
        doc.link.spans.push_back(std::move(span));
    }
    return doc;
}

// --- serialization ---

void emit_table(YAML::Emitter& out, const FrequencyTable& t, const char* value_key, double (*convert)(double)) {
    out << YAML::BeginSeq;
    for (const auto& s : t.samples())
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "f_THz" << YAML::Value << s.frequency / kTHz << YAML::Key
            << value_key << YAML::Value << convert(s.value) << YAML::EndMap;
    out << YAML::EndSeq;
}

std::string format9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const char* kCsvHeader = "cut_frequency_THz,nli_psd_end_W_per_Hz,nli_power_dBm,gsnr_dB,spans,branch_summary";

double parse_double(std::string_view field, std::size_t line) {
    std::string s(field);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ParseError("report csv: bad number '" + s + "'", static_cast<int>(line));
    return v;
}

}  // namespace

std::span<const FiberProfile> fiber_profiles() noexcept {
    return kProfiles;
}

LinkDocument parse_link_document(std::string_view text, const ParseOptions& opts) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        if (e.mark.is_null()) throw ParseError(e.msg);
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    LinkDocument doc;
    try {
        doc = build(root);
    } catch (const YAML::Exception& e) {
        if (e.mark.is_null()) throw ParseError(e.msg);
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    if (opts.validate) require_valid(doc.link);
    return doc;
}

Link parse_link_spec(std::string_view text, const ParseOptions& opts) {
    return parse_link_document(text, opts).link;
}

LinkDocument load_link_document(const std::filesystem::path& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_link_document(buf.str(), opts);
}

std::string serialize_link_spec(const Link& link, std::string_view name) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "version" << YAML::Value << std::string(kSpecVersion);
    if (!name.empty()) out << YAML::Key << "name" << YAML::Value << std::string(name);
    out << YAML::Key << "spans" << YAML::Value << YAML::BeginSeq;
    for (const auto& span : link.spans) {
        out << YAML::BeginMap;
        out << YAML::Key << "length_km" << YAML::Value << span.fiber.length / kKm;
        out << YAML::Key << "fiber" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "gamma_per_W_km" << YAML::Value << span.fiber.gamma * kKm;
        out << YAML::Key << "beta2_ps2_km" << YAML::Value << span.fiber.beta2 / 1e-27;
        out << YAML::Key << "beta3_ps3_km" << YAML::Value << span.fiber.beta3 / 1e-39;
        out << YAML::Key << "fc_THz" << YAML::Value << span.fiber.f_c / kTHz;
        out << YAML::EndMap;

        out << YAML::Key << "loss" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "alpha0_dB_km" << YAML::Value;
        emit_table(out, span.loss.alpha0, "dB_km", field_alpha_to_db_per_km);
        out << YAML::Key << "srs" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "alpha1_dB_km" << YAML::Value;
        emit_table(out, span.loss.alpha1, "dB_km", field_alpha_to_db_per_km);
        out << YAML::Key << "sigma_per_km" << YAML::Value;
        emit_table(out, span.loss.sigma, "per_km", [](double v) { return v * kKm; });
        out << YAML::EndMap << YAML::EndMap;

        out << YAML::Key << "lumped_gain" << YAML::Value;
        if (span.lumped_gain.is_transparent()) {
            out << "transparent";
        } else {
            out << YAML::BeginMap << YAML::Key << "gain_dB" << YAML::Value;
            emit_table(out, span.lumped_gain.gains(), "dB", [](double g) { return 10.0 * std::log10(g); });
            out << YAML::EndMap;
        }

        out << YAML::Key << "comb" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "channels" << YAML::Value << YAML::BeginSeq;
        for (const auto& ch : span.comb.channels)
            out << YAML::Flow << YAML::BeginMap << YAML::Key << "center_THz" << YAML::Value << ch.center / kTHz
                << YAML::Key << "bandwidth_GHz" << YAML::Value << ch.bandwidth / kGHz << YAML::Key << "psd_W_per_Hz"
                << YAML::Value << ch.psd << YAML::EndMap;
        out << YAML::EndSeq;
        out << YAML::Key << "cut" << YAML::Value << span.comb.cut_index;
        out << YAML::EndMap;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string branch_summary(const NliReport& report) {
    std::size_t li2 = 0, asinh = 0, degenerate = 0;
    for (const auto& span : report.per_span)
        for (const auto& island : span.islands) {
            switch (island.branch) {
                case Branch::li2: ++li2; break;
                case Branch::asinh: ++asinh; break;
                case Branch::degenerate: ++degenerate; break;
            }
        }
    return "li2:" + std::to_string(li2) + ";asinh:" + std::to_string(asinh) + ";degenerate:" + std::to_string(degenerate);
}

std::string emit_report_csv(std::span<const NliReport> reports) {
    std::vector<const NliReport*> order;
    for (const auto& r : reports) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(),
                     [](const NliReport* a, const NliReport* b) { return a->cut_frequency < b->cut_frequency; });
    std::string out = std::string(kCsvHeader) + "\n";
    for (const NliReport* r : order) {
        out += format9(r->cut_frequency / kTHz) + ",";
        out += format9(r->nli_psd_end) + ",";
        out += format9(10.0 * std::log10(r->nli_power_end() * 1e3)) + ",";
        if (r->gsnr) out += format9(10.0 * std::log10(*r->gsnr));
        out += "," + std::to_string(r->per_span.size()) + "," + branch_summary(*r) + "\n";
    }
    return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
    std::vector<ReportRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1) {
            if (line != kCsvHeader) throw ParseError("report csv: unexpected header", 1);
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (fields.size() != 6) throw ParseError("report csv: expected 6 fields", static_cast<int>(line_no));
        ReportRow row;
        row.cut_frequency_THz = parse_double(fields[0], line_no);
        row.nli_psd_end_W_per_Hz = parse_double(fields[1], line_no);
        row.nli_power_dBm = parse_double(fields[2], line_no);
        if (!fields[3].empty()) row.gsnr_dB = parse_double(fields[3], line_no);
        row.spans = static_cast<std::size_t>(parse_double(fields[4], line_no));
        row.branch_summary = std::string(fields[5]);
        rows.push_back(std::move(row));
    }
    if (line_no == 0) throw ParseError("report csv: empty input");
    return rows;
}

}  // namespace nli
