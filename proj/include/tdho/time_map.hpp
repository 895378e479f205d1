#pragma once

// Monotone clock change t'(t) = t0' + int_{t0}^{t} e^{-2 nu(s)} ds between the
// time-dependent-mass clock t and the oscillator clock t'.

#include <cstddef>
#include <optional>
#include <vector>

#include "tdho/profile.hpp"

namespace tdho {

class TimeMap {
public:
    /// Throws ValidationError when the node values stop increasing in floating point
    /// (the map saturates, e.g. for strongly growing nu over long spans).
    static TimeMap build(const SystemSpec& spec, double t_end, std::size_t n_nodes = 2048,
                         std::optional<double> tprime0 = std::nullopt);

    double forward(double t) const;
    double inverse(double tprime) const;
    /// dt'/dt = e^{-2 nu(t)}.
    double rate(double t) const;

    Interval t_range() const { return {t_.front(), t_.back()}; }
    Interval tprime_range() const { return {tp_.front(), tp_.back()}; }
    const std::vector<double>& t_nodes() const { return t_; }
    const std::vector<double>& tprime_nodes() const { return tp_; }
    bool is_identity() const { return identity_; }
    const SystemSpec& spec() const { return spec_; }

private:
    TimeMap() = default;
    double panel_integral(double a, double b) const;

    SystemSpec spec_;
    std::vector<double> t_, tp_;
    double offset_ = 0.0;
    bool identity_ = false;
};

/// g2(t') = h2(t(t')) e^{4 nu(t(t'))}.
double eval_g2_of_tprime(const SystemSpec& spec, const TimeMap& map, double tprime);

}  // namespace tdho
