#pragma once

namespace nli {

/// j [Li2(-jx) - Li2(jx)] for real x, i.e. 2 Ti2(x) = 2 * integral_0^x atan(t)/t dt.
/// Odd and strictly increasing; full double precision over the whole real line.
[[nodiscard]] double li2_imag_diff(double x) noexcept;

/// pi * asinh(x/2), the large-argument approximant of li2_imag_diff.
[[nodiscard]] double li2_diff_asinh_approx(double x) noexcept;

/// pi * ln(1 + x). Defined for x >= 0 only; throws std::domain_error otherwise.
[[nodiscard]] double li2_diff_log_approx(double x);

}  // namespace nli
