#include "tdho/propagator.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/operators.hpp"

namespace tdho {

namespace {

constexpr cplx I{0.0, 1.0};

struct Coefficients {
    double a;  // kinetic prefactor
    double b;  // x^2 prefactor
};

Coefficients coefficients_at(const Model& model, Frame frame, double time) {
    if (frame == Frame::to) {
        if (model.map && model.map->is_identity()) {
            return {1.0, eval_h2(model.spec, time - model.tprime0() + model.spec.t0)};
        }
        return {1.0, model.g2_at_tprime(time)};
    }
    const double nu = eval_nu(model.spec, time);
    return {std::exp(-2.0 * nu), eval_h2(model.spec, time) * std::exp(2.0 * nu)};
}

cplx reciprocal(cplx z) {
    const double d = z.real() * z.real() + z.imag() * z.imag();
    return {z.real() / d, -z.imag() / d};
}

// Solves the tridiagonal system (lower, diag, upper) x = rhs in place of rhs; diag is overwritten
// with reciprocal pivots.
void thomas(const std::vector<cplx>& lower, std::vector<cplx>& diag, const std::vector<cplx>& upper,
            std::vector<cplx>& rhs) {
    const std::size_t n = diag.size();
    diag[0] = reciprocal(diag[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const cplx m = lower[i] * diag[i - 1];
        diag[i] = reciprocal(diag[i] - m * upper[i - 1]);
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] *= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) * diag[i];
}

double discrete_norm(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z);
    return acc;
}

}  // namespace

void PropagatorConfig::validate() const {
    grid.validate();
    if (frame == Frame::tq) {
        throw ValidationError("PropagatorConfig.frame: propagation runs in the TO or TM frame");
    }
    if (!(dt > 0.0)) throw ValidationError("PropagatorConfig.dt_positive: dt must be positive");
    if (dt > max_dt_over_dx * grid.dx() * (1.0 + 1e-12)) {
        throw ValidationError("PropagatorConfig.dt_budget: dt exceeds max_dt_over_dx * dx");
    }
}

PropagationResult propagate(const PropagatorConfig& config, const Model& model,
                            const WaveSample& initial, double t_final) {
    config.validate();
    if (!(initial.grid == config.grid) || initial.values.size() != config.grid.n) {
        throw UsageError("propagate: initial sample is not on the configured grid");
    }
    if (initial.frame != config.frame) throw UsageError("propagate: initial sample frame mismatch");
    const Interval range = frame_time_range(model, config.frame);
    range.clamp_checked(t_final, "propagate");
    if (t_final < initial.time) throw ValidationError("propagate: t_final precedes the initial time");

    const std::size_t n = config.grid.n;
    const double dx = config.grid.dx();
    const double t0 = initial.time;
    const std::size_t steps =
        t_final == t0 ? 0 : static_cast<std::size_t>(std::ceil((t_final - t0) / config.dt - 1e-9));
    const double dt = steps ? (t_final - t0) / static_cast<double>(steps) : 0.0;
    const double tau = 0.5 * dt;
    const bool compact = config.laplacian == Laplacian::compact;
    const double bd = compact ? 10.0 / 12.0 : 1.0;
    const double bo = compact ? 1.0 / 12.0 : 0.0;

    std::vector<double> x2(n);
    for (std::size_t i = 0; i < n; ++i) x2[i] = config.grid.x(i) * config.grid.x(i);

    std::vector<cplx> psi = initial.values;
    const double norm0 = discrete_norm(psi);
    if (!(norm0 > 0.0)) throw ValidationError("propagate: initial state has zero norm");
    std::vector<cplx> lower(n), diag(n), upper(n), rhs(n);
    std::vector<double> v(n);
    double drift = 0.0;

    for (std::size_t s = 0; s < steps; ++s) {
        const double t_mid = t0 + (static_cast<double>(s) + 0.5) * dt;
        const Coefficients c = coefficients_at(model, config.frame, std::min(t_mid, range.hi));
        const double k = 0.5 * c.a / (dx * dx);
        for (std::size_t i = 0; i < n; ++i) v[i] = c.b * x2[i];

        // H_ij psi_j: kinetic (-k, 2k, -k) plus B V with B = (bo, bd, bo).
        for (std::size_t i = 0; i < n; ++i) {
            cplx hpsi = (2.0 * k + bd * v[i]) * psi[i];
            cplx bpsi = bd * psi[i];
            if (i > 0) {
                hpsi += (-k + bo * v[i - 1]) * psi[i - 1];
                bpsi += bo * psi[i - 1];
            }
            if (i + 1 < n) {
                hpsi += (-k + bo * v[i + 1]) * psi[i + 1];
                bpsi += bo * psi[i + 1];
            }
            rhs[i] = bpsi - I * tau * hpsi;
            diag[i] = bd + I * tau * (2.0 * k + bd * v[i]);
            lower[i] = i > 0 ? bo + I * tau * (-k + bo * v[i - 1]) : cplx{};
            upper[i] = i + 1 < n ? bo + I * tau * (-k + bo * v[i + 1]) : cplx{};
        }
        thomas(lower, diag, upper, rhs);
        psi.swap(rhs);

        if (std::abs(psi.front()) > config.edge_tol || std::abs(psi.back()) > config.edge_tol) {
            throw CoverageError("propagate: packet reached the grid edge at t = " +
                                std::to_string(t0 + (s + 1) * dt));
        }
        drift = std::abs(discrete_norm(psi) / norm0 - 1.0);
        if (drift > config.norm_tol) {
            throw StabilityError("propagate: norm drift " + std::to_string(drift) + " exceeds tolerance");
        }
    }

    PropagationResult out;
    out.final.frame = config.frame;
    out.final.time = t_final;
    out.final.grid = config.grid;
    out.final.values = std::move(psi);
    out.steps = steps;
    out.norm_drift = drift;
    return out;
}

L2Distance l2_distance(const WaveSample& a, const WaveSample& b) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
        throw UsageError("l2_distance: samples live on different grids");
    }
    WaveSample d = a;
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
    L2Distance out;
    out.raw = l2_norm(d);
    const double na = inner_product(a, a).real(), nb = inner_product(b, b).real();
    out.phase_aligned = std::sqrt(std::max(0.0, na + nb - 2.0 * std::abs(inner_product(b, a))));
    return out;
}

}  // namespace tdho
