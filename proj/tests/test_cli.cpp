#include <catch_amalgamated.hpp>

#include "nli/cli.hpp"
#include "nli/config_io.hpp"
#include "nli/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

const std::string kDataDir = NLI_DATA_DIR;
const std::string kFive = kDataDir + "/five_channel.yaml";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = nli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("validate") {
    auto r = invoke({"validate", "--link", kFive});
    CHECK(r.code == 0);
    CHECK(r.out == "OK\n");

    auto text = nli::serialize_link_spec(nli::load_link_document(kFive).link);
    text.replace(text.find("length_km: 80"), 13, "length_km: -80");
    const auto bad = temp_file("nli_cli_invalid.yaml", text);
    r = invoke({"validate", "--link", bad.string()});
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("span 1: span length must be positive"));
}

TEST_CASE("bad flags and files exit with 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"compute"}).code == 1);
    CHECK(invoke({"compute", "--link", kDataDir + "/nope.yaml"}).code == 1);
    CHECK(invoke({"compute", "--link", kFive, "--branch", "exact"}).code == 1);
    CHECK(invoke({"sweep", "--link", kFive, "--jobs", "0"}).code == 1);
    CHECK(invoke({"compare-oracle", "--link", kFive, "--tier", "split-step"}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);

    const auto broken = temp_file("nli_cli_broken.yaml", "version: nli-spec/1\nspans: [\n");
    auto r = invoke({"compute", "--link", broken.string()});
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("nli_cli_broken.yaml:"));

    r = invoke({"compute", "--link", kFive, "--cut", "193.25"});
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("CUT frequency not found"));
    CHECK(invoke({"compute", "--link", kFive, "--cut", "7"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("computation errors exit with 2") {
    // Passes validation (the CUT has no SRS), fails in the oracle at an impossible tolerance.
    const auto r = invoke({"compare-oracle", "--link", kDataDir + "/minimal.yaml", "--rel-tol", "1e-30", "--max-intervals", "50"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("computation failed"));
}

TEST_CASE("compute writes one row") {
    auto r = invoke({"compute", "--link", kFive});
    REQUIRE(r.code == 0);
    auto rows = nli::parse_report_csv(r.out);
    REQUIRE(rows.size() == 1);
    CHECK_THAT(rows[0].cut_frequency_THz, WithinRel(193.2, 1e-12));
    const auto report = nli::link_nli_psd(nli::load_link_document(kFive).link);
    CHECK_THAT(rows[0].nli_psd_end_W_per_Hz, WithinRel(report.nli_psd_end, 5e-9));

    r = invoke({"compute", "--link", kFive, "--cut", "193.4", "--ase-dbm", "-25"});
    REQUIRE(r.code == 0);
    rows = nli::parse_report_csv(r.out);
    CHECK_THAT(rows[0].cut_frequency_THz, WithinRel(193.4, 1e-12));
    REQUIRE(rows[0].gsnr_dB.has_value());
    CHECK(*rows[0].gsnr_dB > 10.0);
    CHECK(*rows[0].gsnr_dB < 30.0);

    const auto out = std::filesystem::temp_directory_path() / "nli_cli_compute.csv";
    std::filesystem::remove(out);
    r = invoke({"compute", "--link", kFive, "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(std::filesystem::exists(out));
}

TEST_CASE("sweep: one ascending row per channel, identical across job counts") {
    const auto one = invoke({"sweep", "--link", kFive, "--jobs", "1"});
    REQUIRE(one.code == 0);
    const auto rows = nli::parse_report_csv(one.out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].cut_frequency_THz > rows[i - 1].cut_frequency_THz);
    for (const char* jobs : {"2", "3", "8"}) CHECK(invoke({"sweep", "--link", kFive, "--jobs", jobs}).out == one.out);

    // compute for channel k is the k-th sweep row
    std::istringstream lines(one.out);
    std::string header, line;
    std::getline(lines, header);
    for (int k = 0; k < 5; ++k) {
        std::getline(lines, line);
        const auto c = invoke({"compute", "--link", kFive, "--cut", std::to_string(k)});
        CHECK(c.out == header + "\n" + line + "\n");
    }
}

TEST_CASE("compare-oracle on the rational tier") {
    const auto r = invoke({"compare-oracle", "--link", kFive, "--tier", "rational", "--rel-tol", "1e-10"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "span,channel,island,center_THz,branch,closed_form,oracle,rel_error,tier");
    int n = 0;
    while (std::getline(lines, line)) {
        ++n;
        const auto comma = line.find_last_of(',');
        const auto prev = line.find_last_of(',', comma - 1);
        CHECK(std::stod(line.substr(prev + 1, comma - prev - 1)) <= 1e-7);
        CHECK(line.substr(comma + 1) == "rational");
        CHECK_THAT(line, ContainsSubstring(",li2,"));
    }
    CHECK(n == 15);
}

TEST_CASE("fit-srs table") {
    auto r = invoke({"fit-srs", "--link", kFive});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 16);
    CHECK_THAT(r.out, ContainsSubstring("span,channel,center_THz,alpha0_dB_km,alpha1_dB_km,sigma_per_km,flagged"));
    CHECK(r.out.find(",yes") == std::string::npos);

    r = invoke({"fit-srs", "--link", kDataDir + "/minimal.yaml"});
    CHECK(r.code == 1);
    CHECK_THAT(r.err, ContainsSubstring("no srs_fit section"));
}

TEST_CASE("sweep library entry point") {
    const auto link = nli::load_link_document(kFive).link;
    const auto reports = nli::sweep(link, {}, 4, 1e-6);
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) CHECK(r.gsnr.has_value());
    CHECK(reports[2].nli_psd_end == nli::link_nli_psd(link).nli_psd_end);
}
