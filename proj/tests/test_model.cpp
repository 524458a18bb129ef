#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "nli/error.hpp"
#include "nli/model.hpp"

#include <algorithm>
#include <stdexcept>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

bool has_message(const nli::ValidationResult& r, const std::string& text) {
    const auto m = r.messages();
    return std::any_of(m.begin(), m.end(), [&](const std::string& s) { return s.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("dB/km to field loss") {
    CHECK(nli::db_per_km_to_field_alpha(0.0) == 0.0);
    CHECK_THAT(nli::db_per_km_to_field_alpha(0.2), WithinRel(2.302585092994046e-5, 1e-15));
    CHECK(nli::db_per_km_to_field_alpha(-0.2) == -nli::db_per_km_to_field_alpha(0.2));
    for (double v : {0.15, 0.2, 0.35, -0.1})
        CHECK_THAT(nli::field_alpha_to_db_per_km(nli::db_per_km_to_field_alpha(v)), WithinRel(v, 1e-15));
}

TEST_CASE("frequency table lookup") {
    const nli::FrequencyTable t({{1.0, 10.0}, {2.0, 20.0}, {4.0, 40.0}});
    CHECK(t.nearest(0.0) == 10.0);
    CHECK(t.nearest(1.4) == 10.0);
    CHECK(t.nearest(1.6) == 20.0);
    CHECK(t.nearest(3.1) == 40.0);
    CHECK(t.nearest(9.0) == 40.0);
    CHECK(t.interpolate(0.0) == 10.0);
    CHECK(t.interpolate(1.5) == 15.0);
    CHECK(t.interpolate(3.0) == 30.0);
    CHECK(t.interpolate(5.0) == 40.0);
    CHECK(nli::FrequencyTable::constant(3.0).nearest(1e14) == 3.0);
    CHECK(nli::FrequencyTable::constant(3.0).interpolate(1e14) == 3.0);

    CHECK_THROWS_AS(nli::FrequencyTable(std::vector<nli::FrequencyTable::Sample>{}), std::invalid_argument);
    CHECK_THROWS_AS(nli::FrequencyTable({{2.0, 1.0}, {1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(nli::FrequencyTable({{1.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(nli::FrequencyTable({{1.0, std::nan("")}}), std::invalid_argument);
}

TEST_CASE("channel power and comb lookup") {
    const auto comb = fixtures::comb();
    CHECK_THAT(comb.channels[0].power(), WithinRel(1e-3, 1e-15));
    CHECK(comb.cut().center == comb.channels[2].center);
    CHECK(comb.find(193.1e12) == 1u);
    CHECK_FALSE(comb.find(193.15e12).has_value());
}

TEST_CASE("valid single-channel link passes") {
    fixtures::CombSpec c;
    c.channels = 1;
    c.cut = 0;
    const auto link = fixtures::link(1, fixtures::span(c));
    const auto r = nli::validate_link(link);
    CHECK(r.ok());
    CHECK_NOTHROW(nli::require_valid(link));
}

TEST_CASE("CUT frequency mismatch across spans") {
    auto link = fixtures::link(2, fixtures::span());
    for (auto& ch : link.spans[1].comb.channels) ch.center += 1e9;
    link.spans[1].loss = fixtures::flat_loss(link.spans[1].comb, link.spans[0].loss.alpha0_at(193e12));
    const auto r = nli::validate_link(link);
    CHECK(has_message(r, "CUT frequency varies across spans"));
    CHECK_THROWS_AS(nli::require_valid(link), nli::ValidationError);
}

TEST_CASE("CUT bandwidth mismatch across spans") {
    auto link = fixtures::link(2, fixtures::span());
    link.spans[1].comb.channels[2].bandwidth = 50e9;
    CHECK(has_message(nli::validate_link(link), "CUT bandwidth varies across spans"));
}

TEST_CASE("perturbative regime violation") {
    auto link = fixtures::link(1, fixtures::span());
    auto& comb = link.spans[0].comb;
    link.spans[0].loss = fixtures::flat_loss(comb, 2e-5, 1.5);
    const auto r = nli::validate_link(link);
    CHECK(has_message(r, "perturbative regime violated"));
    CHECK(std::count_if(r.violations.begin(), r.violations.end(), [](const nli::Violation& v) {
              return v.kind == nli::ViolationKind::perturbative_regime;
          }) == 5);
}

TEST_CASE("overlapping channels, bad sigma, bad CUT index") {
    auto link = fixtures::link(1, fixtures::span());
    link.spans[0].comb.channels[1].center = link.spans[0].comb.channels[0].center + 30e9;
    CHECK(has_message(nli::validate_link(link), "channels overlap"));

    link = fixtures::link(1, fixtures::span());
    link.spans[0].loss.sigma = nli::FrequencyTable::constant(0.0);
    CHECK(has_message(nli::validate_link(link), "sigma must be positive"));

    link = fixtures::link(1, fixtures::span());
    link.spans[0].comb.cut_index = 9;
    CHECK(has_message(nli::validate_link(link), "CUT index out of range"));

    CHECK(has_message(nli::validate_link(nli::Link{}), "link has no spans"));
}

TEST_CASE("touching channels do not overlap") {
    fixtures::CombSpec c;
    c.spacing_GHz = 64.0;
    CHECK(nli::validate_link(fixtures::link(1, fixtures::span(c))).ok());
}

TEST_CASE("validation error lists every violation") {
    auto link = fixtures::link(2, fixtures::span());
    link.spans[0].loss.sigma = nli::FrequencyTable::constant(-1.0);
    link.spans[1].fiber.length = 0.0;
    try {
        nli::require_valid(link);
        FAIL("expected ValidationError");
    } catch (const nli::ValidationError& e) {
        CHECK(e.violations().size() == 6);
        CHECK_THAT(std::string(e.what()), ContainsSubstring("span 2: span length must be positive"));
    }
}

TEST_CASE("report power") {
    nli::NliReport r;
    r.cut_bandwidth = 64e9;
    r.nli_psd_end = 1e-18;
    CHECK_THAT(r.nli_power_end(), WithinRel(6.4e-8, 1e-15));
    CHECK(std::string(nli::to_string(nli::Branch::degenerate)) == "degenerate");
}
