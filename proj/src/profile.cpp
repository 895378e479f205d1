#include "tdho/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdho/errors.hpp"

namespace tdho {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double slack_for(const Interval& iv, double rel_slack) {
    const double span = iv.bounded() ? iv.span() : 1.0;
    return rel_slack * std::max(1.0, std::abs(span));
}

// Fritsch-Carlson slopes with the three-point end condition (same as PCHIP).
std::vector<double> monotone_slopes(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> m(n, 0.0);
    if (n == 2) {
        m[0] = m[1] = (y[1] - y[0]) / (t[1] - t[0]);
        return m;
    }
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = t[k + 1] - t[k];
        delta[k] = (y[k + 1] - y[k]) / h[k];
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) {
            m[k] = 0.0;
            continue;
        }
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) {
            s = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) {
            s = 3.0 * d0;
        }
        return s;
    };
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return m;
}

}  // namespace

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

bool Interval::contains(double t, double rel_slack) const {
    const double s = slack_for(*this, rel_slack);
    return t >= lo - s && t <= hi + s;
}

double Interval::clamp_checked(double t, const char* what, double rel_slack) const {
    if (!contains(t, rel_slack)) {
        throw DomainError(std::string(what) + ": time " + std::to_string(t) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return std::clamp(t, lo, hi);
}

Interval intersect(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

const char* to_string(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::constant:
            return "constant";
        case ProfileFamily::linear:
            return "linear";
        case ProfileFamily::sinusoidal:
            return "sinusoidal";
        case ProfileFamily::polynomial:
            return "polynomial";
        case ProfileFamily::tabulated:
            return "tabulated";
    }
    return "unknown";
}

TimeProfile::TimeProfile(Repr repr, Interval domain) : repr_(std::move(repr)), domain_(domain) {
    if (!(domain_.lo <= domain_.hi)) {
        throw ValidationError("TimeProfile.domain: lower bound exceeds upper bound");
    }
}

TimeProfile TimeProfile::constant(double value, Interval domain) {
    return TimeProfile(Constant{value}, domain);
}

TimeProfile TimeProfile::linear(double intercept, double slope, Interval domain) {
    return TimeProfile(Linear{intercept, slope}, domain);
}

TimeProfile TimeProfile::sinusoidal(double offset, double amplitude, double frequency,
                                    double phase, Interval domain) {
    return TimeProfile(Sinusoidal{offset, amplitude, frequency, phase}, domain);
}

TimeProfile TimeProfile::polynomial(std::vector<double> coefficients, Interval domain) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    return TimeProfile(Polynomial{std::move(coefficients)}, domain);
}

TimeProfile TimeProfile::tabulated(std::vector<double> times, std::vector<double> values,
                                   Interpolation interpolation) {
    if (times.size() != values.size()) {
        throw ValidationError("TimeProfile.tabulated: times and values differ in length");
    }
    if (times.size() < 2) {
        throw ValidationError("TimeProfile.tabulated: at least two samples required");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || !std::isfinite(values[k])) {
            throw ValidationError("TimeProfile.tabulated: samples must be finite");
        }
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw ValidationError("TimeProfile.tabulated: sample times must be strictly increasing");
        }
    }
    Interval domain{times.front(), times.back()};
    auto slopes = interpolation == Interpolation::monotone_cubic ? monotone_slopes(times, values)
                                                                 : std::vector<double>{};
    return TimeProfile(Tabulated{std::move(times), std::move(values), std::move(slopes), interpolation},
                       domain);
}

ProfileFamily TimeProfile::family() const {
    return std::visit(overloaded{
                          [](const Constant&) { return ProfileFamily::constant; },
                          [](const Linear&) { return ProfileFamily::linear; },
                          [](const Sinusoidal&) { return ProfileFamily::sinusoidal; },
                          [](const Polynomial&) { return ProfileFamily::polynomial; },
                          [](const Tabulated&) { return ProfileFamily::tabulated; },
                      },
                      repr_);
}

bool TimeProfile::is_identically_zero() const {
    const auto* c = std::get_if<Constant>(&repr_);
    return c != nullptr && c->value == 0.0;
}

bool TimeProfile::has_analytic_derivative() const {
    const auto* tab = std::get_if<Tabulated>(&repr_);
    return tab == nullptr || tab->interpolation == Interpolation::monotone_cubic;
}

double TimeProfile::operator()(double t) const {
    return value_unchecked(domain_.clamp_checked(t, "TimeProfile"));
}

double TimeProfile::derivative(double t) const {
    t = domain_.clamp_checked(t, "TimeProfile");
    if (has_analytic_derivative()) return derivative_unchecked(t);
    const double h = 1e-5 * (domain_.bounded() ? domain_.span() : std::max(1.0, std::abs(t)));
    const double lo = std::max(domain_.lo, t - h);
    const double hi = std::min(domain_.hi, t + h);
    return (value_unchecked(hi) - value_unchecked(lo)) / (hi - lo);
}

double TimeProfile::value_unchecked(double t) const {
    return std::visit(
        overloaded{
            [](const Constant& c) { return c.value; },
            [t](const Linear& l) { return l.intercept + l.slope * t; },
            [t](const Sinusoidal& s) {
                return s.offset + s.amplitude * std::sin(s.frequency * t + s.phase);
            },
            [t](const Polynomial& p) {
                double acc = 0.0;
                for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
                    acc = acc * t + *it;
                }
                return acc;
            },
            [t](const Tabulated& tab) {
                const auto& x = tab.times;
                auto it = std::upper_bound(x.begin(), x.end(), t);
                std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
                k = std::min(k, x.size() - 2);
                const double h = x[k + 1] - x[k];
                const double s = (t - x[k]) / h;
                if (tab.interpolation == Interpolation::linear) {
                    return tab.values[k] + s * (tab.values[k + 1] - tab.values[k]);
                }
                const double s2 = s * s, s3 = s2 * s;
                const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
                const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
                return h00 * tab.values[k] + h10 * h * tab.slopes[k] + h01 * tab.values[k + 1] +
                       h11 * h * tab.slopes[k + 1];
            },
        },
        repr_);
}

double TimeProfile::derivative_unchecked(double t) const {
    return std::visit(
        overloaded{
            [](const Constant&) { return 0.0; },
            [](const Linear& l) { return l.slope; },
            [t](const Sinusoidal& s) {
                return s.amplitude * s.frequency * std::cos(s.frequency * t + s.phase);
            },
            [t](const Polynomial& p) {
                double acc = 0.0;
                for (std::size_t k = p.coefficients.size(); k-- > 1;) {
                    acc = acc * t + static_cast<double>(k) * p.coefficients[k];
                }
                return acc;
            },
            [t](const Tabulated& tab) {
                const auto& x = tab.times;
                auto it = std::upper_bound(x.begin(), x.end(), t);
                std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
                k = std::min(k, x.size() - 2);
                const double h = x[k + 1] - x[k];
                const double s = (t - x[k]) / h;
                const double s2 = s * s;
                const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1;
                const double d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
                return (d00 * tab.values[k] + d01 * tab.values[k + 1]) / h + d10 * tab.slopes[k] +
                       d11 * tab.slopes[k + 1];
            },
        },
        repr_);
}

Interval SystemSpec::domain() const { return intersect(nu.domain(), h2.domain()); }

void SystemSpec::validate() const {
    const Interval d = domain();
    if (!(d.lo <= d.hi)) {
        throw ValidationError("SystemSpec.common_domain: nu and h2 domains do not overlap");
    }
    if (!std::isfinite(t0)) {
        throw ValidationError("SystemSpec.t0_finite: t0 must be finite");
    }
    if (!d.contains(t0, 0.0)) {
        throw ValidationError("SystemSpec.domain_contains_t0: t0 lies outside the common domain");
    }
    if (!std::isfinite(nu(t0)) || !std::isfinite(nu.derivative(t0))) {
        throw ValidationError("SystemSpec.nu_finite: nu(t0) is not finite");
    }
    if (!std::isfinite(h2(t0))) {
        throw ValidationError("SystemSpec.h2_finite: h2(t0) is not finite");
    }
}

double eval_nu(const SystemSpec& spec, double t) {
    spec.domain().clamp_checked(t, "eval_nu");
    return spec.nu(t);
}

double eval_nu_dot(const SystemSpec& spec, double t) {
    spec.domain().clamp_checked(t, "eval_nu_dot");
    return spec.nu.derivative(t);
}

double eval_h(const SystemSpec& spec, double t) { return -2.0 * eval_nu_dot(spec, t); }

double eval_h2(const SystemSpec& spec, double t) {
    spec.domain().clamp_checked(t, "eval_h2");
    return spec.h2(t);
}

double natural_period(const SystemSpec& spec) {
    const double nd = eval_nu_dot(spec, spec.t0);
    const double omega2 = 2.0 * eval_h2(spec, spec.t0) - nd * nd;
    const double omega = omega2 > 0.0 ? std::sqrt(omega2) : 1.0;
    return 2.0 * std::numbers::pi / omega;
}

namespace presets {

SystemSpec harmonic(double omega) {
    return {TimeProfile::constant(0.0), TimeProfile::constant(0.5 * omega * omega), 0.0};
}

SystemSpec free_particle() {
    return {TimeProfile::constant(0.0), TimeProfile::constant(0.0), 0.0};
}

SystemSpec caldirola_kanai(double lambda, double omega) {
    return {TimeProfile::linear(0.0, lambda), TimeProfile::constant(0.5 * omega * omega), 0.0};
}

SystemSpec modulated(double eps, double omega, double frequency) {
    const double base = 0.5 * omega * omega;
    return {TimeProfile::constant(0.0), TimeProfile::sinusoidal(base, base * eps, frequency), 0.0};
}

SystemSpec by_name(const std::string& name) {
    if (name == "harmonic") return harmonic();
    if (name == "free") return free_particle();
    if (name == "caldirola-kanai" || name == "ck") return caldirola_kanai();
    if (name == "modulated") return modulated();
    throw ValidationError("presets: unknown preset '" + name + "'");
}

}  // namespace presets

}  // namespace tdho
