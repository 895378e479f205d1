#include "tdho/time_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "tdho/errors.hpp"

namespace tdho {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGLx = {0.1834346424956498, 0.5255324099163290,
                                        0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGLw = {0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

}  // namespace

double TimeMap::panel_integral(double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t k = 0; k < kGLx.size(); ++k) {
        acc += kGLw[k] * (rate(mid - half * kGLx[k]) + rate(mid + half * kGLx[k]));
    }
    return half * acc;
}

double TimeMap::rate(double t) const {
    const double nu = spec_.nu(t);
    const double r = std::exp(-2.0 * nu);
    if (!std::isfinite(nu) || !std::isfinite(r)) {
        throw EvaluationError("TimeMap: non-finite nu at t = " + std::to_string(t));
    }
    return r;
}

TimeMap TimeMap::build(const SystemSpec& spec, double t_end, std::size_t n_nodes,
                       std::optional<double> tprime0) {
    spec.validate();
    if (!(t_end > spec.t0)) throw ValidationError("TimeMap.t_end_after_t0: t_end must exceed t0");
    if (n_nodes < 2) throw ValidationError("TimeMap.n_nodes: at least two nodes required");
    if (!spec.domain().contains(t_end, 0.0)) {
        throw DomainError("TimeMap: t_end outside the profile domain");
    }

    TimeMap m;
    m.spec_ = spec;
    m.offset_ = tprime0.value_or(spec.t0);
    m.identity_ = spec.nu_is_zero();
    m.t_.resize(n_nodes);
    m.tp_.resize(n_nodes);
    const double h = (t_end - spec.t0) / static_cast<double>(n_nodes - 1);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        m.t_[k] = k + 1 == n_nodes ? t_end : spec.t0 + h * static_cast<double>(k);
    }
    m.tp_[0] = m.offset_;
    for (std::size_t k = 1; k < n_nodes; ++k) {
        m.tp_[k] = m.identity_ ? m.offset_ + (m.t_[k] - spec.t0)
                               : m.tp_[k - 1] + m.panel_integral(m.t_[k - 1], m.t_[k]);
        if (!(m.tp_[k] > m.tp_[k - 1])) {
            throw ValidationError(
                "TimeMap.strictly_increasing: t' saturates in floating point near t = " +
                std::to_string(m.t_[k]) + "; shorten the span or use the TM clock");
        }
    }
    return m;
}

double TimeMap::forward(double t) const {
    t = t_range().clamp_checked(t, "TimeMap.forward");
    if (identity_) return offset_ + (t - spec_.t0);
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    k = std::min(k, t_.size() - 2);
    if (t == t_[k]) return tp_[k];
    return tp_[k] + panel_integral(t_[k], t);
}

double TimeMap::inverse(double tprime) const {
    tprime = tprime_range().clamp_checked(tprime, "TimeMap.inverse");
    if (identity_) return spec_.t0 + (tprime - offset_);
    auto it = std::upper_bound(tp_.begin(), tp_.end(), tprime);
    std::size_t k = it == tp_.begin() ? 0 : static_cast<std::size_t>(it - tp_.begin()) - 1;
    k = std::min(k, tp_.size() - 2);
    const double base = t_[k];
    double lo = base, hi = t_[k + 1];
    const double target = tprime - tp_[k];
    if (target <= 0.0) return lo;
    double t = lo + (hi - lo) * target / (tp_[k + 1] - tp_[k]);
    // Bracketed Newton on F(t) = int_{t_k}^{t} e^{-2 nu} - target.
    for (int iter = 0; iter < 60; ++iter) {
        const double f = panel_integral(base, t) - target;
        if (f > 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        double next = t - f / rate(t);
        if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 4e-16 * std::max(1.0, std::abs(t)) || f == 0.0) return next;
        t = next;
    }
    return t;
}

double eval_g2_of_tprime(const SystemSpec& spec, const TimeMap& map, double tprime) {
    const double t = map.inverse(tprime);
    return eval_h2(spec, t) * std::exp(4.0 * eval_nu(spec, t));
}

}  // namespace tdho
