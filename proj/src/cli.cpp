#include "nli/cli.hpp"

#include "nli/config_io.hpp"
#include "nli/error.hpp"
#include "nli/link_physics.hpp"
#include "nli/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace nli {

namespace {

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

BranchPolicy parse_policy(const std::string& s) {
    if (s == "li2") return BranchPolicy::li2;
    if (s == "asinh") return BranchPolicy::asinh;
    return BranchPolicy::automatic;
}

OracleTier parse_tier(const std::string& s) {
    if (s == "matched") return OracleTier::matched;
    if (s == "full") return OracleTier::full;
    return OracleTier::rational;
}

// A bare integer selects by index into span 1's comb, anything else is a frequency in THz.
double resolve_cut(const Link& link, const std::string& cut) {
    const auto& comb = link.spans.front().comb;
    if (!cut.empty() && std::all_of(cut.begin(), cut.end(), [](unsigned char c) { return std::isdigit(c); })) {
        const auto idx = std::stoul(cut);
        if (idx >= comb.channels.size())
            throw ValidationError({"--cut: index " + cut + " out of range (" + std::to_string(comb.channels.size()) +
                                   " channels)"});
        return comb.channels[idx].center;
    }
    const double f = std::stod(cut) * 1e12;
    if (!comb.find(f)) throw ValidationError({"--cut: CUT frequency not found"});
    return f;
}

std::vector<double> common_frequencies(const Link& link) {
    std::vector<double> out;
    for (const auto& ch : link.spans.front().comb.channels) {
        const bool everywhere = std::all_of(link.spans.begin(), link.spans.end(),
                                            [&](const Span& s) { return s.comb.find(ch.center).has_value(); });
        if (everywhere) out.push_back(ch.center);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path == "-") {
        out << content;
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::invalid_argument("cannot write " + path);
    file << content;
}

std::string compare_oracle(const Link& link, const EngineOptions& opts, OracleTier tier, const QuadratureConfig& cfg) {
    std::string out = "span,channel,island,center_THz,branch,closed_form,oracle,rel_error,tier\n";
    for (std::size_t s = 0; s < link.spans.size(); ++s) {
        const Span& span = link.spans[s];
        for (std::size_t n = 0; n < span.comb.channels.size(); ++n) {
            const bool is_cut = n == span.comb.cut_index;
            const IslandParams p = island_params(span, n);
            const IslandValue closed = evaluate_island(p, is_cut ? IslandKind::sci : IslandKind::xci, opts);
            const double oracle = island_quadrature(p, span, tier, cfg);
            out += std::to_string(s) + "," + std::to_string(n) + "," + (is_cut ? "SCI" : "XCI") + "," +
                   g9(span.comb.channels[n].center / 1e12) + "," + to_string(closed.branch) + "," + g9(closed.value) +
                   "," + g9(oracle) + "," + g9(std::abs(closed.value - oracle) / oracle) + "," + to_string(tier) + "\n";
        }
    }
    return out;
}

std::string fit_srs_table(const LinkDocument& doc) {
    if (!doc.srs_fit) throw ValidationError({"fit-srs: the link file has no srs_fit section"});
    std::string out = "span,channel,center_THz,alpha0_dB_km,alpha1_dB_km,sigma_per_km,flagged\n";
    const std::size_t spans = doc.srs_scope == SrsFitScope::link ? 1 : doc.link.spans.size();
    for (std::size_t s = 0; s < spans; ++s) {
        const Span& span = doc.link.spans[s];
        std::vector<double> baseline;
        for (const auto& ch : span.comb.channels) baseline.push_back(span.loss.alpha0_at(ch.center));
        const SrsFit fit = fit_srs_params(span.comb, baseline, *doc.srs_fit);
        for (std::size_t n = 0; n < baseline.size(); ++n) {
            const bool flagged = std::find(fit.flagged.begin(), fit.flagged.end(), n) != fit.flagged.end();
            out += std::to_string(s) + "," + std::to_string(n) + "," + g9(span.comb.channels[n].center / 1e12) + "," +
                   g9(field_alpha_to_db_per_km(baseline[n])) + "," + g9(field_alpha_to_db_per_km(fit.alpha1[n])) +
                   "," + g9(fit.sigma[n] * 1e3) + "," + (flagged ? "yes" : "no") + "\n";
        }
    }
    return out;
}

}  // namespace

Link with_cut(const Link& link, double frequency) {
    Link out = link;
    std::vector<std::string> missing;
    for (std::size_t s = 0; s < out.spans.size(); ++s) {
        const auto idx = out.spans[s].comb.find(frequency);
        if (!idx)
            missing.push_back("span " + std::to_string(s + 1) + ": CUT frequency not found");
        else
            out.spans[s].comb.cut_index = *idx;
    }
    if (!missing.empty()) throw ValidationError(std::move(missing));
    return out;
}

void attach_gsnr(NliReport& report, const Link& link, double ase_power) {
    const Span& last = link.spans.back();
    const double cut_power = last.comb.cut().power() * span_power_transfer(last, report.cut_frequency);
    report.gsnr = gsnr(report, cut_power, ase_power);
}

std::vector<NliReport> sweep(const Link& link, const EngineOptions& opts, std::size_t jobs,
                             std::optional<double> ase_power) {
    const std::vector<double> freqs = common_frequencies(link);
    std::vector<NliReport> reports(freqs.size());
    std::vector<std::exception_ptr> errors(freqs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < freqs.size(); i = next++) {
            try {
                const Link l = with_cut(link, freqs[i]);
                reports[i] = link_nli_psd(l, opts);
                if (ase_power) attach_gsnr(reports[i], l, *ase_power);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(freqs.size(), 1));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return reports;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form nonlinear interference estimator for multi-span WDM links", "nli"};
    app.require_subcommand(1);

    std::string link_path;
    std::string out_path = "-";
    std::string branch = "auto";
    std::string cut;
    std::string tier = "rational";
    QuadratureConfig quad{1e-8, 4000};
    std::size_t jobs = 1;
    double ase_dbm = 0.0;

    const std::vector<std::string> branches{"auto", "li2", "asinh"};
    auto common = [&](CLI::App* sub) {
        sub->add_option("--link", link_path, "Link description file (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Output path, - for stdout");
    };

    auto* compute = app.add_subcommand("compute", "NLI PSD and optional GSNR at one CUT");
    common(compute);
    compute->add_option("--branch", branch)->check(CLI::IsMember(branches));
    compute->add_option("--cut", cut, "CUT as a 0-based channel index or a centre frequency in THz");
    auto* compute_ase = compute->add_option("--ase-dbm", ase_dbm, "ASE power in the CUT bandwidth at link end, dBm");

    auto* sweep_cmd = app.add_subcommand("sweep", "Every channel as CUT in turn");
    common(sweep_cmd);
    sweep_cmd->add_option("--branch", branch)->check(CLI::IsMember(branches));
    sweep_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    auto* sweep_ase = sweep_cmd->add_option("--ase-dbm", ase_dbm, "ASE power in the CUT bandwidth at link end, dBm");

    auto* compare = app.add_subcommand("compare-oracle", "Closed-form islands against quadrature");
    common(compare);
    std::string compare_branch = "li2";
    compare->add_option("--branch", compare_branch)->check(CLI::IsMember(branches));
    compare->add_option("--cut", cut, "CUT as a 0-based channel index or a centre frequency in THz");
    compare->add_option("--tier", tier)->check(CLI::IsMember({"rational", "matched", "full"}));
    compare->add_option("--rel-tol", quad.rel_tol)->check(CLI::PositiveNumber);
    compare->add_option("--max-intervals", quad.max_subdivisions, "Interval budget per adaptive integral")
        ->check(CLI::PositiveNumber);

    auto* fit = app.add_subcommand("fit-srs", "Per-channel SRS parameters from the srs_fit section");
    common(fit);

    auto* validate = app.add_subcommand("validate", "List invariant violations");
    validate->add_option("--link", link_path, "Link description file (YAML)")->required()->check(CLI::ExistingFile);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) {
            const Link link = load_link_document(link_path, {.validate = false}).link;
            const auto result = validate_link(link);
            if (result.ok()) {
                out << "OK\n";
                return 0;
            }
            for (const auto& m : result.messages()) out << m << "\n";
            return 1;
        }
        if (fit->parsed()) {
            write_output(out_path, fit_srs_table(load_link_document(link_path, {.validate = false})), out);
            return 0;
        }

        Link link = load_link_document(link_path).link;
        if (compute->parsed()) {
            EngineOptions opts;
            opts.policy = parse_policy(branch);
            if (!cut.empty()) link = with_cut(link, resolve_cut(link, cut));
            NliReport report = link_nli_psd(link, opts);
            if (compute_ase->count() > 0) attach_gsnr(report, link, 1e-3 * std::pow(10.0, ase_dbm / 10.0));
            write_output(out_path, emit_report_csv(std::span<const NliReport>(&report, 1)), out);
            return 0;
        }
        if (sweep_cmd->parsed()) {
            EngineOptions opts;
            opts.policy = parse_policy(branch);
            std::optional<double> ase;
            if (sweep_ase->count() > 0) ase = 1e-3 * std::pow(10.0, ase_dbm / 10.0);
            const auto reports = sweep(link, opts, jobs, ase);
            write_output(out_path, emit_report_csv(reports), out);
            return 0;
        }
        if (compare->parsed()) {
            EngineOptions opts;
            opts.policy = parse_policy(compare_branch);
            if (!cut.empty()) link = with_cut(link, resolve_cut(link, cut));
            write_output(out_path, compare_oracle(link, opts, parse_tier(tier), quad), out);
            return 0;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& v : e.violations()) err << "  " << v << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << link_path;
        if (e.line() > 0) err << ":" << e.line() << ":" << e.column();
        err << ": " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace nli
