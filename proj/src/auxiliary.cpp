#include "tdho/auxiliary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tdho/errors.hpp"
#include "tdho/ode.hpp"

namespace tdho {

namespace {

constexpr cplx I{0.0, 1.0};

cplx wronskian_of(cplx xi, cplx xi_dot) { return xi * std::conj(xi_dot) - xi_dot * std::conj(xi); }

}  // namespace

cplx AuxInitialConditions::wronskian() const { return wronskian_of(xi0, xi_dot0); }

void AuxInitialConditions::validate(double tol) const {
    if (std::abs(wronskian() + I) > tol) {
        throw ValidationError("AuxInitialConditions.wronskian: xi0 conj(xi_dot0) - xi_dot0 conj(xi0) != -i");
    }
}

AuxInitialConditions default_ic(double g2_at_t0) {
    const double omega0 = g2_at_t0 > 0.0 ? std::sqrt(2.0 * g2_at_t0) : 1.0;
    const double xi0 = 1.0 / std::sqrt(2.0 * omega0);
    return {cplx(xi0, 0.0), cplx(0.0, std::sqrt(0.5 * omega0))};
}

double AuxPoint::wronskian_residual() const { return std::abs(wronskian_of(xi, xi_dot) + I); }

PhiValues phi_values(const AuxPoint& p) {
    PhiValues v;
    v.phi1 = p.xi * p.xi;
    v.phi2 = std::conj(v.phi1);
    v.phi3 = 2.0 * std::norm(p.xi);
    v.phi3_dot = 4.0 * (p.xi_dot * std::conj(p.xi)).real();
    v.phi3_ddot = -4.0 * p.g2 * v.phi3 + 4.0 * std::norm(p.xi_dot);
    return v;
}

AuxPoint AuxSolution::at(double s) const {
    s = span().clamp_checked(s, "AuxSolution");
    auto it = std::lower_bound(steps_.begin(), steps_.end(), s,
                               [](const Step& st, double v) { return st.s < v; });
    std::size_t k = static_cast<std::size_t>(it - steps_.begin());
    if (k == steps_.size()) k = steps_.size() - 1;
    if (k > 0 && std::abs(steps_[k - 1].s - s) <= std::abs(steps_[k].s - s)) --k;
    const Step& base = steps_[k];

    AuxPoint p;
    p.s = s;
    p.g2 = g2_rate_(s) / rate_(s);
    if (s == base.s) {
        p.xi = base.xi;
        p.xi_dot = base.xi_dot;
        p.theta = base.theta;
        return p;
    }
    const double local = k + 1 < steps_.size() ? steps_[k + 1].s - steps_[k].s
                                               : steps_[k].s - steps_[k - 1].s;
    const double dist = s - base.s;
    const int nsub = std::max(1, static_cast<int>(std::ceil(4.0 * std::abs(dist) / local)));
    const double h = dist / nsub;
    auto f = [this](double u, const ode::State<2>& y) {
        const double r = rate_(u);
        return ode::State<2>{r * y[1], -2.0 * g2_rate_(u) * y[0]};
    };
    ode::State<2> y{base.xi, base.xi_dot};
    double u = base.s;
    for (int i = 0; i < nsub; ++i, u += h) y = ode::rk4_step<2>(f, u, y, h);
    p.xi = y[0];
    p.xi_dot = y[1];
    p.theta = base.theta + std::arg(p.xi / base.xi);
    return p;
}

AuxPoint AuxSolution::at_tprime(double tprime) const {
    if (clock_ == Clock::to) return at(tprime);
    if (!map_) throw UsageError("AuxSolution.at_tprime: mass-clock solution has no time map");
    return at(map_->inverse(tprime));
}

AuxPoint AuxSolution::hatted(double t) const {
    if (clock_ == Clock::tm) return at(t);
    if (!map_) throw UsageError("AuxSolution.hatted: oscillator-clock solution has no time map");
    return at(map_->forward(t));
}

AuxSolution solve_aux(Clock clock, std::function<double(double)> rate,
                      std::function<double(double)> g2_rate, Interval span,
                      const AuxInitialConditions& ic, std::size_t n_nodes,
                      const SolveOptions& opts, std::shared_ptr<const TimeMap> map) {
    ic.validate();
    if (!(span.hi > span.lo) || !span.bounded()) {
        throw ValidationError("AuxSolution.span: need a finite span with hi > lo");
    }
    if (n_nodes < 2) throw ValidationError("AuxSolution.n_nodes: at least two nodes required");

    AuxSolution sol;
    sol.clock_ = clock;
    sol.rate_ = std::move(rate);
    sol.g2_rate_ = std::move(g2_rate);
    sol.map_ = std::move(map);

    auto check_w = [&](double s, cplx xi, cplx xi_dot) {
        const double w = std::abs(wronskian_of(xi, xi_dot) + I);
        sol.max_w_ = std::max(sol.max_w_, w);
        if (w > opts.wronskian_tol) {
            throw AccuracyError("AuxSolution.wronskian: |W + i| = " + std::to_string(w) +
                                " exceeds tolerance at s = " + std::to_string(s) +
                                "; tighten the integrator tolerances");
        }
    };

    sol.steps_.push_back({span.lo, ic.xi0, ic.xi_dot0, std::arg(ic.xi0)});
    auto f = [&sol](double s, const ode::State<2>& y) {
        const double r = sol.rate_(s);
        const double g = sol.g2_rate_(s);
        if (!std::isfinite(r) || !std::isfinite(g)) {
            throw EvaluationError("AuxSolution: non-finite coefficient at s = " + std::to_string(s));
        }
        return ode::State<2>{r * y[1], -2.0 * g * y[0]};
    };
    auto accept = [&](double s, const ode::State<2>& y, double) {
        const auto& prev = sol.steps_.back();
        const double dtheta = std::arg(y[0] / prev.xi);
        if (std::abs(dtheta) > 0.25 * std::numbers::pi) return false;
        check_w(s, y[0], y[1]);
        sol.steps_.push_back({s, y[0], y[1], prev.theta + dtheta});
        return true;
    };
    ode::Dopri5Options dopt;
    dopt.rtol = opts.rtol;
    dopt.atol = opts.atol;
    dopt.h_max = span.span() / 8.0;
    ode::dopri5<2>(f, span.lo, span.hi, ode::State<2>{ic.xi0, ic.xi_dot0}, dopt, accept);

    sol.nodes_.reserve(n_nodes);
    const double h = span.span() / static_cast<double>(n_nodes - 1);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const double s = k + 1 == n_nodes ? span.hi : span.lo + h * static_cast<double>(k);
        AuxPoint p = sol.at(s);
        check_w(s, p.xi, p.xi_dot);
        if (k > 0 && std::abs(p.theta - sol.nodes_.back().theta) >= std::numbers::pi) {
            throw SamplingError("AuxSolution.theta_continuity: phase advances by >= pi between nodes "
                                "near s = " + std::to_string(s) + "; increase n_nodes");
        }
        sol.nodes_.push_back(p);
    }
    return sol;
}

AuxSolution solve_xi(std::function<double(double)> g2_of_tprime, Interval span,
                     const AuxInitialConditions& ic, std::size_t n_nodes, const SolveOptions& opts,
                     std::shared_ptr<const TimeMap> map) {
    return solve_aux(Clock::to, [](double) { return 1.0; }, std::move(g2_of_tprime), span, ic,
                     n_nodes, opts, std::move(map));
}

AuxSolution solve_xi_tm(const SystemSpec& spec, Interval span, const AuxInitialConditions& ic,
                        std::size_t n_nodes, const SolveOptions& opts,
                        std::shared_ptr<const TimeMap> map) {
    auto rate = [spec](double t) { return std::exp(-2.0 * spec.nu(t)); };
    auto g2_rate = [spec](double t) { return spec.h2(t) * std::exp(2.0 * spec.nu(t)); };
    return solve_aux(Clock::tm, rate, g2_rate, span, ic, n_nodes, opts, std::move(map));
}

}  // namespace tdho
