#pragma once

// Time-dependent coefficient profiles nu(t) and h2(t) of the time-dependent-mass
// Hamiltonian  H = 1/2 e^{-2 nu(t)} P^2 + h2(t) e^{2 nu(t)} X^2.

#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace tdho {

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    double span() const { return hi - lo; }
    bool bounded() const;
    /// Closed-interval membership with a relative slack of `rel_slack * max(1, |span|)`.
    bool contains(double t, double rel_slack = 1e-12) const;
    /// Clamp `t` into [lo, hi]; throws DomainError when `t` is further out than the slack.
    double clamp_checked(double t, const char* what, double rel_slack = 1e-12) const;
};

Interval intersect(const Interval& a, const Interval& b);

enum class ProfileFamily { constant, linear, sinusoidal, polynomial, tabulated };
enum class Interpolation { linear, monotone_cubic };

const char* to_string(ProfileFamily f);

/// A real scalar function of time.  Immutable once constructed.
class TimeProfile {
public:
    static TimeProfile constant(double value, Interval domain = {});
    /// intercept + slope * t
    static TimeProfile linear(double intercept, double slope, Interval domain = {});
    /// offset + amplitude * sin(frequency * t + phase)
    static TimeProfile sinusoidal(double offset, double amplitude, double frequency,
                                  double phase = 0.0, Interval domain = {});
    /// sum_k coefficients[k] * t^k
    static TimeProfile polynomial(std::vector<double> coefficients, Interval domain = {});
    /// Samples at strictly increasing times; the domain is [times.front(), times.back()].
    static TimeProfile tabulated(std::vector<double> times, std::vector<double> values,
                                 Interpolation interpolation = Interpolation::monotone_cubic);

    double operator()(double t) const;
    /// Analytic derivative where the family has one, otherwise a centered difference.
    double derivative(double t) const;
    bool has_analytic_derivative() const;

    ProfileFamily family() const;
    const Interval& domain() const { return domain_; }
    /// True only for the constant family with value exactly zero.
    bool is_identically_zero() const;

private:
    friend struct ProfileCodec;

    struct Constant {
        double value;
    };
    struct Linear {
        double intercept, slope;
    };
    struct Sinusoidal {
        double offset, amplitude, frequency, phase;
    };
    struct Polynomial {
        std::vector<double> coefficients;
    };
    struct Tabulated {
        std::vector<double> times, values, slopes;
        Interpolation interpolation;
    };
    using Repr = std::variant<Constant, Linear, Sinusoidal, Polynomial, Tabulated>;

    TimeProfile(Repr repr, Interval domain);
    double value_unchecked(double t) const;
    double derivative_unchecked(double t) const;

    Repr repr_;
    Interval domain_;
};

/// The pair (nu(t), h2(t)) together with the time origin t0.
struct SystemSpec {
    TimeProfile nu = TimeProfile::constant(0.0);
    TimeProfile h2 = TimeProfile::constant(0.5);
    double t0 = 0.0;

    /// Common domain of nu and h2.
    Interval domain() const;
    /// Throws ValidationError naming the first violated invariant.
    void validate() const;
    bool nu_is_zero() const { return nu.is_identically_zero(); }
};

double eval_nu(const SystemSpec& spec, double t);
double eval_nu_dot(const SystemSpec& spec, double t);
/// Dilation drift of the quadratic frame, h(t) = -2 nu'(t).
double eval_h(const SystemSpec& spec, double t);
double eval_h2(const SystemSpec& spec, double t);

/// 2*pi / Omega with Omega^2 = 2 h2(t0) - nu'(t0)^2, or 2*pi when that is not positive.
double natural_period(const SystemSpec& spec);

namespace presets {

/// nu = 0, h2 = omega^2 / 2.
SystemSpec harmonic(double omega = 1.0);
/// nu = 0, h2 = 0.
SystemSpec free_particle();
/// nu = lambda t, h2 = omega^2 / 2 (exponentially growing mass).
SystemSpec caldirola_kanai(double lambda = 0.5, double omega = 1.0);
/// nu = 0, h2 = omega^2/2 (1 + eps sin(frequency t)).
SystemSpec modulated(double eps = 0.2, double omega = 1.0, double frequency = 1.0);

/// Lookup by name: "harmonic", "free", "caldirola-kanai", "modulated".
SystemSpec by_name(const std::string& name);

}  // namespace presets

}  // namespace tdho
