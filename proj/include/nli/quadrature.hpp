#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature for real or complex integrands.
// The interval with the largest error estimate is bisected until the summed error
// estimate meets max(abs_tol, rel_tol * |integral|) or the interval budget runs out.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace nli::quad {

/// Nodes and weights of the 10-point Gauss / 21-point Kronrod pair on [-1, 1].
struct Gk21Rule {
    std::span<const double> abscissa;        // 11 non-negative Kronrod nodes, abscissa[0] == 0
    std::span<const double> kronrod_weights; // 11
    std::span<const double> gauss_weights;   // 5, for the odd-indexed Kronrod nodes
};

[[nodiscard]] const Gk21Rule& gk21();

template <class T>
struct Result {
    T value{};
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 2000;
    /// Initial uniform partition; panels are at most this wide when > 0.
    double max_panel_width = 0.0;
};

namespace detail {

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> gk21_panel(F& f, double a, double b) {
    const auto& rule = gk21();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const T centre = f(mid);
    T kronrod = centre * rule.kronrod_weights[0];
    T gauss{};
    for (std::size_t i = 1; i < rule.abscissa.size(); ++i) {
        const double dx = half * rule.abscissa[i];
        const T pair = f(mid - dx) + f(mid + dx);
        kronrod += pair * rule.kronrod_weights[i];
        if (i % 2 == 1) gauss += pair * rule.gauss_weights[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [a, b]. F must be callable as T(double).
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> result;
    if (a == b) {
        result.converged = true;
        return result;
    }

    std::priority_queue<detail::Panel<T>> heap;
    std::size_t panels = 1;
    if (opt.max_panel_width > 0.0)
        panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(b - a) / opt.max_panel_width)));
    T total{};
    double error = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
        const double hi = (i + 1 == panels) ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(panels);
        auto p = detail::gk21_panel<T>(f, lo, hi);
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    result.evaluations = 21 * panels;

    const std::size_t budget = std::max(opt.max_intervals, panels);
    auto done = [&] { return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!done() && heap.size() < budget) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);  // interval cannot shrink further
            break;
        }
        auto left = detail::gk21_panel<T>(f, worst.a, mid);
        auto right = detail::gk21_panel<T>(f, mid, worst.b);
        result.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the panels so the running updates leave no drift.
    T resummed{};
    double err_sum = 0.0;
    result.intervals = heap.size();
    while (!heap.empty()) {
        resummed += heap.top().value;
        err_sum += heap.top().error;
        heap.pop();
    }
    result.value = resummed;
    result.abs_error = err_sum;
    result.converged = err_sum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(resummed));
    return result;
}

}  // namespace nli::quad
