#pragma once

// Dormand-Prince 5(4) with PI step control on a fixed-size complex state.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "tdho/errors.hpp"

namespace tdho::ode {

template <std::size_t N>
using State = std::array<std::complex<double>, N>;

struct Dopri5Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_init = 0.0;  // 0 picks a starting step automatically
    double h_max = 0.0;   // 0 means unbounded
    std::size_t max_steps = 5'000'000;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (const auto& [c, k] : terms) {
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
}

}  // namespace detail

/// Integrates y' = f(s, y) from s0 to s1 (s1 > s0).  `accept(s, y, h)` is called after
/// every accepted step and may return false to request a retry with half the step.
template <std::size_t N, class F, class Accept>
void dopri5(F&& f, double s0, double s1, State<N> y, const Dopri5Options& opt, Accept&& accept) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = s1 - s0;
    double h = opt.h_init > 0.0 ? opt.h_init : std::min(1e-3, 0.01 * span);
    const double h_max = opt.h_max > 0.0 ? opt.h_max : span;
    double s = s0;
    double err_prev = 1e-4;
    State<N> k1 = f(s, y);
    std::size_t steps = 0;

    while (s < s1) {
        if (++steps > opt.max_steps) throw AccuracyError("dopri5: step budget exhausted");
        bool last = false;
        if (s + h >= s1) {
            h = s1 - s;
            last = true;
        }
        const State<N> k2 = f(s + c2 * h, detail::axpy<N>(y, h, {{a21, &k1}}));
        const State<N> k3 = f(s + c3 * h, detail::axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = f(s + c4 * h, detail::axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 = f(s + c5 * h, detail::axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 = f(s + h, detail::axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y5 = detail::axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<N> k7 = f(s + h, y5);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const std::complex<double> e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (!std::isfinite(err)) throw AccuracyError("dopri5: non-finite state");

        if (err <= 1.0) {
            const double s_new = last ? s1 : s + h;
            if (!accept(s_new, y5, h)) {
                h *= 0.5;
                continue;
            }
            s = s_new;
            y = y5;
            k1 = k7;
            const double fac = 0.9 * std::pow(err, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
            h *= std::clamp(std::isfinite(fac) ? fac : 5.0, 0.2, 5.0);
            h = std::min(h, h_max);
            err_prev = std::max(err, 1e-4);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (h < 1e-14 * std::max(1.0, std::abs(s))) throw AccuracyError("dopri5: step size underflow");
    }
}

/// One classical RK4 step.
template <std::size_t N, class F>
State<N> rk4_step(F&& f, double s, const State<N>& y, double h) {
    const State<N> k1 = f(s, y);
    const State<N> k2 = f(s + 0.5 * h, detail::axpy<N>(y, h, {{0.5, &k1}}));
    const State<N> k3 = f(s + 0.5 * h, detail::axpy<N>(y, h, {{0.5, &k2}}));
    const State<N> k4 = f(s + h, detail::axpy<N>(y, h, {{1.0, &k3}}));
    State<N> out = y;
    for (std::size_t i = 0; i < N; ++i) out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace tdho::ode
