#pragma once

// Command-line front end. Subcommands: compute, sweep, compare-oracle, fit-srs, validate.
// Exit status: 0 success, 1 bad flags / unreadable or invalid link file, 2 computation error.

#include "nli/engine.hpp"
#include "nli/model.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nli {

/// Copy of `link` whose every span designates the channel at `frequency` as CUT.
/// Throws ValidationError when some span has no channel there.
[[nodiscard]] Link with_cut(const Link& link, double frequency);

/// Fills report.gsnr. The CUT power at the link end is the last span's input CUT power
/// times that span's power transfer; ase_power is in the CUT bandwidth at the link end.
void attach_gsnr(NliReport& report, const Link& link, double ase_power);

/// Each channel of span 1 that is present in every span takes a turn as CUT. Work is
/// spread over `jobs` threads; the result is ordered by frequency whatever `jobs` is.
[[nodiscard]] std::vector<NliReport> sweep(const Link& link, const EngineOptions& opts, std::size_t jobs = 1,
                                           std::optional<double> ase_power = std::nullopt);

/// args excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nli
