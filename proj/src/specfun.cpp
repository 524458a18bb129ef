#include "nli/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nli {

namespace {

constexpr int kMaxTerms = 200;
constexpr double kRelStop = 1e-17;

// Ti2(x) = sum_k (-1)^k x^(2k+1) / (2k+1)^2, used for 0 <= x <= 0.5 (ratio <= 1/4).
double ti2_power_series(double x) {
    const double x2 = x * x;
    double power = x;
    double sum = 0.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double n = 2.0 * k + 1.0;
        const double term = power / (n * n);
        sum += (k % 2 == 0) ? term : -term;
        if (term < kRelStop * sum) break;
        power *= x2;
    }
    return sum;
}

// Euler's transformation of the arctangent series,
//   atan(t)/t = sum_n c_n t^(2n) / (1+t^2)^(n+1),  c_n = 4^n (n!)^2 / (2n+1)!,
// integrated term by term with t = tan(phi):
//   Ti2(x) = sum_n c_n J_n,  J_n = integral_0^atan(x) sin^(2n)(phi) dphi.
// All terms are positive and decay like sin^(2n)(phi) <= (1/2)^n for x <= 1.
double ti2_euler_series(double x) {
    const double phi = std::atan(x);
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double s2 = s * s;
    double j = phi;       // J_0
    double coeff = 1.0;   // c_0
    double s_odd = s;     // sin^(2n-1)(phi) for the recurrence
    double sum = j;
    for (int n = 1; n < kMaxTerms; ++n) {
        j = (2.0 * n - 1.0) / (2.0 * n) * j - s_odd * c / (2.0 * n);
        coeff *= (2.0 * n) / (2.0 * n + 1.0);
        const double term = coeff * j;
        sum += term;
        if (term < kRelStop * sum) break;
        s_odd *= s2;
    }
    return sum;
}

double ti2_unit_interval(double x) {
    return x <= 0.5 ? ti2_power_series(x) : ti2_euler_series(x);
}

}  // namespace

double li2_imag_diff(double x) noexcept {
    const double ax = std::abs(x);
    double ti2;
    if (ax <= 1.0) {
        ti2 = ti2_unit_interval(ax);
    } else {
        // Inversion: Ti2(x) = (pi/2) ln x + Ti2(1/x) for x > 0.
        ti2 = 0.5 * std::numbers::pi * std::log(ax) + ti2_unit_interval(1.0 / ax);
    }
    return std::copysign(2.0 * ti2, x);
}

double li2_diff_asinh_approx(double x) noexcept {
    return std::numbers::pi * std::asinh(0.5 * x);
}

double li2_diff_log_approx(double x) {
    if (!(x >= 0.0)) throw std::domain_error("li2_diff_log_approx: argument must be non-negative");
    return std::numbers::pi * std::log1p(x);
}

}  // namespace nli
