#include "tdho/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdho/errors.hpp"

namespace tdho {

namespace {

constexpr cplx I{0.0, 1.0};

cplx at_or_zero(const std::vector<cplx>& v, long i) {
    return i < 0 || i >= static_cast<long>(v.size()) ? cplx{} : v[static_cast<std::size_t>(i)];
}

// Weights w with sum_k w_k o_k^j = [j == 1] for j < n (first derivative, unit spacing).
std::vector<double> first_derivative_weights(const std::vector<int>& offsets) {
    const std::size_t n = offsets.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) a[j][k] = std::pow(static_cast<double>(offsets[k]), j);
        a[j][n] = j == 1 ? 1.0 : 0.0;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = a[k][n] / a[k][k];
    return w;
}

void require_same_grid(const WaveSample& a, const WaveSample& b, const char* what) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
        throw UsageError(std::string(what) + ": samples live on different grids");
    }
}

WaveSample like(const WaveSample& w, std::vector<cplx> values) {
    WaveSample out;
    out.frame = w.frame;
    out.time = w.time;
    out.grid = w.grid;
    out.values = std::move(values);
    return out;
}

std::vector<cplx> ladder_values(const OperatorCoefficients& oc, Ladder dir, const WaveSample& w,
                                const std::vector<cplx>& dpsi) {
    std::vector<cplx> out(w.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = w.grid.x(i);
        out[i] = dir == Ladder::lowering
                     ? oc.p * dpsi[i] - I * oc.xc * x * w.values[i]
                     : -std::conj(oc.p) * dpsi[i] + I * std::conj(oc.xc) * x * w.values[i];
    }
    return out;
}

// D psi = -i (x psi' + psi/2)
std::vector<cplx> dilation_values(const WaveSample& w, const std::vector<cplx>& dpsi) {
    std::vector<cplx> out(w.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = -I * (w.grid.x(i) * dpsi[i] + 0.5 * w.values[i]);
    }
    return out;
}

}  // namespace

namespace {

std::vector<cplx> d_dx_stride(const WaveSample& w, long s) {
    const auto& v = w.values;
    const double inv = 1.0 / (12.0 * static_cast<double>(s) * w.grid.dx());
    std::vector<cplx> out(v.size());
    for (long i = 0; i < static_cast<long>(v.size()); ++i) {
        out[static_cast<std::size_t>(i)] =
            (at_or_zero(v, i - 2 * s) - 8.0 * at_or_zero(v, i - s) + 8.0 * at_or_zero(v, i + s) -
             at_or_zero(v, i + 2 * s)) *
            inv;
    }
    return out;
}

}  // namespace

std::vector<cplx> d_dx(const WaveSample& w) { return d_dx_stride(w, 1); }

std::vector<cplx> d2_dx2(const WaveSample& w) {
    const auto& v = w.values;
    const double dx = w.grid.dx();
    const double inv = 1.0 / (12.0 * dx * dx);
    std::vector<cplx> out(v.size());
    for (long i = 0; i < static_cast<long>(v.size()); ++i) {
        out[static_cast<std::size_t>(i)] =
            (-at_or_zero(v, i - 2) + 16.0 * at_or_zero(v, i - 1) - 30.0 * at_or_zero(v, i) +
             16.0 * at_or_zero(v, i + 1) - at_or_zero(v, i + 2)) *
            inv;
    }
    return out;
}

std::vector<cplx> d_dx_2nd(const WaveSample& w) {
    const auto& v = w.values;
    const double inv = 1.0 / (2.0 * w.grid.dx());
    std::vector<cplx> out(v.size());
    for (long i = 0; i < static_cast<long>(v.size()); ++i) {
        out[static_cast<std::size_t>(i)] = (at_or_zero(v, i + 1) - at_or_zero(v, i - 1)) * inv;
    }
    return out;
}

OperatorCoefficients operator_coefficients(const Model& model, Frame frame, double time) {
    const FrameQuantities fq = frame_quantities(model, frame, time);
    OperatorCoefficients oc;
    oc.frame = frame;
    oc.time = time;
    oc.p = fq.p;
    oc.xc = fq.xc;
    const double P2 = std::norm(fq.p), X2 = std::norm(fq.xc);
    const double phi3_dot = 4.0 * (fq.xc * std::conj(fq.p)).real();
    switch (frame) {
        case Frame::to: {
            const double phi3 = 2.0 * P2;
            oc.cT = phi3;
            oc.cD = 0.5 * phi3_dot;
            oc.cX2 = -fq.g2 * phi3 + X2;
            oc.s_a = 1.0;
            oc.s_c = 2.0 * fq.g2;
            break;
        }
        case Frame::tm: {
            const double phi3 = 2.0 * P2;
            oc.cT = phi3 * std::exp(2.0 * fq.nu);
            oc.cD = 0.5 * phi3_dot;
            oc.cX2 = -fq.g2 * phi3 + X2;
            oc.s_a = std::exp(-2.0 * fq.nu);
            oc.s_c = 2.0 * fq.h2 * std::exp(2.0 * fq.nu);
            break;
        }
        case Frame::tq: {
            const double h = -2.0 * fq.nu_dot;
            oc.C3T = 2.0 * P2;
            oc.C3D = -0.5 * h * oc.C3T + 0.5 * phi3_dot;
            oc.C3X2 = fq.h2 * oc.C3T - X2;
            oc.cT = oc.C3T;
            oc.cD = oc.C3D;
            oc.cX2 = -oc.C3X2;
            oc.s_a = 1.0;
            oc.s_b = h;
            oc.s_c = 2.0 * fq.h2;
            break;
        }
    }
    return oc;
}

TqIdentityResiduals tq_identity_residuals(const Model& model, double t) {
    const OperatorCoefficients oc = operator_coefficients(model, Frame::tq, t);
    const AuxPoint a = model.aux->hatted(t);
    const PhiValues phi = phi_values(a);
    const double nu = eval_nu(model.spec, t);
    const double h = eval_h(model.spec, t);
    const double c3t = phi.phi3 * std::exp(2.0 * nu);
    const double c3x2 = -0.25 * phi.phi3_ddot * std::exp(-2.0 * nu);
    const double c3d = -0.5 * h * c3t + 0.5 * phi.phi3_dot;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    return {rel(oc.C3T, c3t), rel(oc.C3X2, c3x2), rel(oc.C3D, c3d)};
}

std::vector<cplx> WaveStencil::time_derivative() const {
    std::vector<int> shifted(offsets.size());
    const int c = offsets[center_index];
    for (std::size_t k = 0; k < offsets.size(); ++k) shifted[k] = offsets[k] - c;
    const auto w = first_derivative_weights(shifted);
    std::vector<cplx> out(center().values.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (w[k] == 0.0) continue;
        const double wk = w[k] / delta;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * samples[k].values[i];
    }
    return out;
}

WaveStencil make_stencil(const WaveFactory& f, double time, double delta, int order, Interval range) {
    if (order != 2 && order != 4) throw ValidationError("TimeStencil.order: must be 2 or 4");
    if (!(delta > 0.0)) throw ValidationError("TimeStencil.delta: must be positive");
    const int m = order / 2;
    int lo = -m, hi = m;
    const double eps = 1e-12 * std::max(1.0, std::abs(time));
    while (time + lo * delta < range.lo - eps) {
        ++lo;
        ++hi;
    }
    while (time + hi * delta > range.hi + eps) {
        --lo;
        --hi;
    }
    if (time + lo * delta < range.lo - eps) {
        throw DomainError("TimeStencil: time range too short for the stencil");
    }
    WaveStencil s;
    s.delta = delta;
    for (int k = lo; k <= hi; ++k) {
        s.offsets.push_back(k);
        const double tk = k == 0 ? time : time + k * delta;
        s.samples.push_back(f(std::clamp(tk, range.lo, range.hi)));
        if (k == 0) s.center_index = s.samples.size() - 1;
    }
    for (const auto& w : s.samples) require_same_grid(s.samples.front(), w, "WaveStencil");
    return s;
}

double local_rate(const Model& model, Frame frame, double time) {
    const AuxPoint a = frame == Frame::to ? model.aux->at_tprime(time) : model.aux->hatted(time);
    const PhiValues phi = phi_values(a);
    double w = std::max({1.0 / phi.phi3, std::sqrt(2.0 * std::abs(a.g2)), std::abs(phi.phi3_dot) / phi.phi3});
    if (frame != Frame::to) {
        w = w * std::exp(-2.0 * eval_nu(model.spec, time)) + std::abs(eval_nu_dot(model.spec, time));
    }
    return w;
}

double stencil_delta(const Model& model, Frame frame, double time, const TimeStencil& ts) {
    return ts.relative_delta * 2.0 * std::numbers::pi / local_rate(model, frame, time);
}

WaveStencil state_stencil(const Model& model, Frame frame, const StateLabel& label, double time,
                          const UniformGrid& grid, const TimeStencil& ts) {
    auto f = [&](double t) { return state(model, frame, label, t, grid); };
    return make_stencil(f, time, stencil_delta(model, frame, time, ts), ts.order,
                        frame_time_range(model, frame));
}

WaveSample apply_ladder(const Model& model, Ladder dir, const WaveSample& w, double warn_tol) {
    const OperatorCoefficients oc = operator_coefficients(model, w.frame, w.time);
    const auto d4 = d_dx(w);
    WaveSample out = like(w, ladder_values(oc, dir, w, d4));
    // Richardson: the same stencil on a doubled spacing has 16x the error.
    const WaveSample coarse = like(w, ladder_values(oc, dir, w, d_dx_stride(w, 2)));
    const double scale = std::max(l2_norm(w), 1e-300);
    const double est = relative_residual(out, coarse) * l2_norm(out) / scale / 15.0;
    if (est > warn_tol) {
        out.warnings.push_back("accuracy: estimated ladder stencil error " + std::to_string(est) +
                               " exceeds " + std::to_string(warn_tol) + "; refine the grid");
    }
    return out;
}

WaveSample apply_number_operator(const Model& model, const WaveStencil& s) {
    const WaveSample& w = s.center();
    const OperatorCoefficients oc = operator_coefficients(model, w.frame, w.time);
    const auto dt = s.time_derivative();
    const auto dpsi = d_dx(w);
    const auto dil = dilation_values(w, dpsi);
    std::vector<cplx> out(w.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = w.grid.x(i);
        out[i] = oc.cT * I * dt[i] - oc.cD * dil[i] + oc.cX2 * x * x * w.values[i];
    }
    return like(w, std::move(out));
}

WaveSample apply_casimir(const Model& model, const WaveStencil& s) {
    const WaveSample jm = apply_ladder(model, Ladder::lowering, s.center());
    const WaveSample jpjm = apply_ladder(model, Ladder::raising, jm);
    const WaveSample m = apply_number_operator(model, s);
    std::vector<cplx> out(m.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = jpjm.values[i] - m.values[i];
    return like(m, std::move(out));
}

double schrodinger_residual(const Model& model, const WaveStencil& s) {
    const WaveSample& w = s.center();
    const OperatorCoefficients oc = operator_coefficients(model, w.frame, w.time);
    const auto dt = s.time_derivative();
    const auto dxx = d2_dx2(w);
    std::vector<cplx> dil;
    if (oc.s_b != 0.0) dil = dilation_values(w, d_dx(w));
    std::vector<cplx> out(w.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = w.grid.x(i);
        out[i] = oc.s_a * dxx[i] + 2.0 * I * dt[i] - oc.s_c * x * x * w.values[i];
        if (!dil.empty()) out[i] += oc.s_b * dil[i];
    }
    return l2_norm(like(w, std::move(out))) / l2_norm(w);
}

double schrodinger_residual(const Model& model, Frame frame, const StateLabel& label, double time,
                            const UniformGrid& grid, const TimeStencil& ts) {
    return schrodinger_residual(model, state_stencil(model, frame, label, time, grid, ts));
}

const char* to_string(Commutator c) {
    switch (c) {
        case Commutator::m_jplus:
            return "[M,J+]=+J+";
        case Commutator::m_jminus:
            return "[M,J-]=-J-";
        case Commutator::jminus_jplus:
            return "[J-,J+]=I";
    }
    return "?";
}

double commutator_check(const Model& model, Commutator which, const WaveStencil& probe) {
    const WaveSample& psi = probe.center();
    std::vector<cplx> lhs, expected;
    if (which == Commutator::jminus_jplus) {
        const WaveSample a = apply_ladder(model, Ladder::lowering, apply_ladder(model, Ladder::raising, psi));
        const WaveSample b = apply_ladder(model, Ladder::raising, apply_ladder(model, Ladder::lowering, psi));
        lhs.resize(psi.values.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = a.values[i] - b.values[i];
        expected = psi.values;
    } else {
        const Ladder dir = which == Commutator::m_jplus ? Ladder::raising : Ladder::lowering;
        WaveStencil js = probe;
        for (auto& w : js.samples) w = apply_ladder(model, dir, w);
        const WaveSample m_j = apply_number_operator(model, js);
        const WaveSample j_m = apply_ladder(model, dir, apply_number_operator(model, probe));
        lhs.resize(psi.values.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] = m_j.values[i] - j_m.values[i];
        expected = js.center().values;
        if (dir == Ladder::lowering) {
            for (auto& v : expected) v = -v;
        }
    }
    std::vector<cplx> diff(lhs.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lhs[i] - expected[i];
    return l2_norm(like(psi, std::move(diff))) / l2_norm(psi);
}

double squeeze_eigen_check(const Model& model, Frame frame, double x0, double p0, double r,
                           double theta, double time, const UniformGrid& grid) {
    const WaveSample psi = squeezed_state(model, frame, x0, p0, r, theta, time, grid);
    const cplx alpha = alpha_from_phase_space(model, frame, x0, p0);
    const cplx g = std::polar(std::tanh(r), theta);
    const WaveSample jm = apply_ladder(model, Ladder::lowering, psi);
    const WaveSample jp = apply_ladder(model, Ladder::raising, psi);
    const cplx lambda = alpha - g * std::conj(alpha);
    std::vector<cplx> out(psi.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = jm.values[i] - g * jp.values[i] - lambda * psi.values[i];
    }
    return l2_norm(like(psi, std::move(out))) / l2_norm(psi);
}

cplx inner_product(const WaveSample& a, const WaveSample& b) {
    require_same_grid(a, b, "inner_product");
    const auto w = simpson_weights(a.values.size(), a.grid.dx());
    cplx acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::conj(a.values[i]) * b.values[i];
    return acc;
}

double l2_norm(const WaveSample& a) { return std::sqrt(std::max(0.0, inner_product(a, a).real())); }

double relative_residual(const WaveSample& a, const WaveSample& b, cplx c) {
    require_same_grid(a, b, "relative_residual");
    std::vector<cplx> d(a.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - c * b.values[i];
    return l2_norm(like(a, std::move(d))) / l2_norm(a);
}

}  // namespace tdho
