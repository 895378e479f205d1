#pragma once

// Complex auxiliary solution xi of  xi'' + 2 g2(t') xi = 0  with the Wronskian
// normalization  xi conj(xi') - xi' conj(xi) = -i.  Dots always mean d/dt'.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "tdho/profile.hpp"
#include "tdho/time_map.hpp"

namespace tdho {

using cplx = std::complex<double>;

struct AuxInitialConditions {
    cplx xi0;
    cplx xi_dot0;

    /// xi0 conj(xi_dot0) - xi_dot0 conj(xi0); should equal -i.
    cplx wronskian() const;
    /// Throws ValidationError unless |W + i| <= tol.
    void validate(double tol = 1e-12) const;
};

/// omega0 = sqrt(2 g2) (or 1 when g2 <= 0), xi0 = (2 omega0)^{-1/2}, xi_dot0 = i omega0 xi0.
AuxInitialConditions default_ic(double g2_at_t0);

/// Independent variable of the integration: t' (oscillator clock) or t (mass clock).
enum class Clock { to, tm };

struct AuxPoint {
    double s = 0.0;  // native clock value
    cplx xi;
    cplx xi_dot;     // d xi / d t'
    double theta = 0.0;  // continuous arg xi
    double g2 = 0.0;     // g2 at this instant

    double wronskian_residual() const;
};

struct PhiValues {
    cplx phi1, phi2;
    double phi3 = 0.0, phi3_dot = 0.0, phi3_ddot = 0.0;
};

/// phi1 = xi^2, phi2 = conj(phi1), phi3 = 2|xi|^2, phi3' and phi3'' = -4 g2 phi3 + 4|xi'|^2.
PhiValues phi_values(const AuxPoint& p);

struct SolveOptions {
    double rtol = 1e-12;
    double atol = 0.0;  // xi never vanishes, so a pure relative test is safe
    double wronskian_tol = 1e-9;
};

class AuxSolution {
public:
    Clock clock() const { return clock_; }
    /// Native-clock span.
    Interval span() const { return {steps_.front().s, steps_.back().s}; }

    /// Dense evaluation in the native clock.
    AuxPoint at(double s) const;
    /// Evaluation at oscillator time t'.
    AuxPoint at_tprime(double tprime) const;
    /// Composition with t'(t): xi_hat(t) = xi(t'(t)), xi_dot_hat(t) = (d xi/d t')(t'(t)).
    AuxPoint hatted(double t) const;

    /// Uniformly spaced output nodes in the native clock.
    const std::vector<AuxPoint>& nodes() const { return nodes_; }
    /// Largest |W + i| seen at accepted steps and nodes.
    double max_wronskian_residual() const { return max_w_; }
    std::size_t step_count() const { return steps_.size(); }
    const std::shared_ptr<const TimeMap>& map() const { return map_; }

private:
    friend AuxSolution solve_aux(Clock, std::function<double(double)>, std::function<double(double)>,
                                 Interval, const AuxInitialConditions&, std::size_t,
                                 const SolveOptions&, std::shared_ptr<const TimeMap>);
    struct Step {
        double s;
        cplx xi, xi_dot;
        double theta;
    };

    Clock clock_ = Clock::to;
    std::function<double(double)> rate_;  // dt'/ds
    std::function<double(double)> g2_rate_;  // g2 * dt'/ds
    std::vector<Step> steps_;
    std::vector<AuxPoint> nodes_;
    std::shared_ptr<const TimeMap> map_;
    double max_w_ = 0.0;
};

/// Core solver.  `rate(s)` = dt'/ds and `g2_rate(s)` = g2 dt'/ds at native time s.
AuxSolution solve_aux(Clock clock, std::function<double(double)> rate,
                      std::function<double(double)> g2_rate, Interval span,
                      const AuxInitialConditions& ic, std::size_t n_nodes,
                      const SolveOptions& opts, std::shared_ptr<const TimeMap> map);

/// Integrates in the oscillator clock over `span` (in t').
AuxSolution solve_xi(std::function<double(double)> g2_of_tprime, Interval span,
                     const AuxInitialConditions& ic, std::size_t n_nodes = 2048,
                     const SolveOptions& opts = {}, std::shared_ptr<const TimeMap> map = nullptr);

/// Integrates in the mass clock over `span` (in t):
///   d xi/dt = e^{-2 nu} xi',   d xi'/dt = -2 h2 e^{2 nu} xi.
/// Needed when t'(t) saturates in floating point (e.g. growing-mass profiles over long spans).
AuxSolution solve_xi_tm(const SystemSpec& spec, Interval span, const AuxInitialConditions& ic,
                        std::size_t n_nodes = 2048, const SolveOptions& opts = {},
                        std::shared_ptr<const TimeMap> map = nullptr);

}  // namespace tdho
