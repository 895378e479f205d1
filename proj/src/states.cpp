#include "tdho/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tdho/errors.hpp"

namespace tdho {

namespace {

constexpr cplx I{0.0, 1.0};
const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

void check_real(double im, double re, const char* what) {
    if (std::abs(im) > 1e-10 * std::max(1.0, std::abs(re))) {
        throw AccuracyError(std::string("GaussianParams.reality: Im ") + what + " = " +
                            std::to_string(im));
    }
}

double tail_mass(const GaussianParams& p, const UniformGrid& g) {
    const double var = p.Q * (p.hermite_n >= 0 ? 2.0 * p.hermite_n + 1.0 : 1.0);
    const double s = std::sqrt(2.0 * var);
    return 0.5 * std::erfc((p.Xplus - g.xmin) / s) + 0.5 * std::erfc((g.xmax - p.Xplus) / s);
}

}  // namespace

const char* to_string(StateKind k) {
    switch (k) {
        case StateKind::number:
            return "number";
        case StateKind::coherent:
            return "coherent";
        case StateKind::squeezed:
            return "squeezed";
    }
    return "?";
}

StateKind state_kind_from_string(const std::string& s) {
    if (s == "number") return StateKind::number;
    if (s == "coherent") return StateKind::coherent;
    if (s == "squeezed") return StateKind::squeezed;
    throw ValidationError("StateLabel.kind: unknown kind '" + s + "'");
}

void StateLabel::validate() const {
    if (kind == StateKind::number && n < 0) throw ValidationError("StateLabel.n_nonnegative: n must be >= 0");
    if (r < 0.0) throw ValidationError("StateLabel.r_nonnegative: r must be >= 0");
    if (!std::isfinite(x0) || !std::isfinite(p0) || !std::isfinite(r) || !std::isfinite(theta)) {
        throw ValidationError("StateLabel.finite: parameters must be finite");
    }
}

double hermite_function(int n, double u) {
    double h_prev = 0.0;
    double h = kPiQuarter * std::exp(-0.5 * u * u);
    for (int k = 1; k <= n; ++k) {
        const double next = std::sqrt(2.0 / k) * u * h - std::sqrt((k - 1.0) / k) * h_prev;
        h_prev = h;
        h = next;
    }
    return h;
}

double initial_time(const Model& model, Frame frame) {
    return frame == Frame::to ? model.tprime0() : model.spec.t0;
}

Interval frame_time_range(const Model& model, Frame frame) {
    const bool native = (frame == Frame::to) == (model.aux->clock() == Clock::to);
    if (native) return model.aux->span();
    const TimeMap& map = model.require_map();
    return frame == Frame::to ? map.tprime_range() : map.t_range();
}

FrameQuantities frame_quantities(const Model& model, Frame frame, double time) {
    FrameQuantities fq;
    fq.frame = frame;
    fq.time = time;
    const AuxPoint a = frame == Frame::to ? model.aux->at_tprime(time) : model.aux->hatted(time);
    fq.p = a.xi;
    fq.xc = a.xi_dot;
    fq.theta = a.theta;
    fq.g2 = a.g2;
    if (frame != Frame::to) {
        fq.nu = eval_nu(model.spec, time);
        fq.nu_dot = eval_nu_dot(model.spec, time);
        fq.h2 = eval_h2(model.spec, time);
    } else {
        fq.h2 = fq.g2;
    }
    if (frame == Frame::tq) {
        fq.p *= std::exp(fq.nu);
        fq.xc *= std::exp(-fq.nu);
    }
    return fq;
}

cplx alpha_from_phase_space(const Model& model, Frame frame, double x0, double p0) {
    if (x0 == 0.0 && p0 == 0.0) return 0.0;
    const FrameQuantities fq = frame_quantities(model, frame, initial_time(model, frame));
    return I * (fq.p * p0 - fq.xc * x0);
}

GaussianParams gaussian_params(const FrameQuantities& fq, const StateLabel& label, cplx alpha,
                               bool gamma_form) {
    label.validate();
    const cplx P = fq.p, Xc = fq.xc;
    const cplx Pb = std::conj(P), Xcb = std::conj(Xc);
    GaussianParams g;

    if (label.kind == StateKind::number) {
        g.Q = std::norm(P);
        g.R = 2.0 * (Xc * Pb).real();
        g.hermite_n = label.n;
        g.phase_root = std::polar(1.0, -(label.n + 0.5) * fq.theta);
        g.norm = std::pow(2.0 * g.Q, -0.25);
        return g;
    }

    const double r = label.kind == StateKind::squeezed ? label.r : 0.0;
    const double thz = label.kind == StateKind::squeezed ? label.theta : 0.0;
    const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
    const cplx e = std::polar(1.0, -thz);
    const cplx gamma = std::polar(std::tanh(r), thz);

    cplx Qc, Rc;
    if (gamma_form) {
        const double den = 1.0 - std::norm(gamma);
        Qc = (P + gamma * Pb) * (Pb + std::conj(gamma) * P) / den;
        Rc = ((P + gamma * Pb) * (Xcb + std::conj(gamma) * Xc) +
              (Xc + gamma * Xcb) * (Pb + std::conj(gamma) * P)) /
             den;
    } else {
        const cplx phi1 = P * P, phi2 = Pb * Pb;
        const double phi3 = 2.0 * std::norm(P);
        const cplx phid1 = 2.0 * P * Xc, phid2 = 2.0 * Pb * Xcb;
        const cplx phid3 = 2.0 * (Xc * Pb + P * Xcb);
        Qc = 0.5 * (phi3 * c + (phi1 * e + phi2 * std::conj(e)) * s);
        Rc = 0.5 * (phid3 * c + (phid1 * e + phid2 * std::conj(e)) * s);
    }
    const cplx Xp = alpha * Pb + std::conj(alpha) * P;
    const cplx Xm = -I * (alpha * Pb - std::conj(alpha) * P);
    const cplx Ym = -I * (alpha * P * e - std::conj(alpha) * Pb * std::conj(e));

    g.imag = {Qc.imag(), Rc.imag(), Xp.imag(), Xm.imag(), Ym.imag()};
    check_real(Qc.imag(), Qc.real(), "Q");
    check_real(Rc.imag(), Rc.real(), "R");
    check_real(Xp.imag(), Xp.real(), "X+");
    check_real(Xm.imag(), Xm.real(), "X-");
    check_real(Ym.imag(), Ym.real(), "Y-");

    g.Q = Qc.real();
    if (!(g.Q > 0.0)) throw AccuracyError("GaussianParams.Q_positive: Q <= 0");
    g.R = Rc.real();
    g.Xplus = Xp.real();
    g.Yminus = Ym.real();
    g.Xminus = Xm.real() * c + g.Yminus * s;
    const double beta = fq.theta + std::arg(1.0 + gamma * std::polar(1.0, -2.0 * fq.theta));
    g.phase_root = std::polar(1.0, -0.5 * beta);
    g.norm = std::pow(2.0 * g.Q, -0.25);
    return g;
}

GaussianParams dilate(const GaussianParams& p, double nu) {
    GaussianParams out = p;
    const double en = std::exp(nu);
    out.Q *= en * en;
    out.Xplus *= en;
    out.Xminus *= en;
    out.Yminus *= en;
    out.norm = std::pow(2.0 * out.Q, -0.25);
    return out;
}

GaussianParams state_params(const Model& model, Frame frame, const StateLabel& label, double time,
                            TqRoute route) {
    label.validate();
    const cplx alpha = alpha_from_phase_space(model, frame, label.x0, label.p0);
    if (frame != Frame::tq) return gaussian_params(frame_quantities(model, frame, time), label, alpha);
    if (route == TqRoute::direct) {
        return gaussian_params(frame_quantities(model, Frame::tq, time), label, alpha, true);
    }
    const GaussianParams tm = gaussian_params(frame_quantities(model, Frame::tm, time), label, alpha);
    return dilate(tm, eval_nu(model.spec, time));
}

cplx evaluate_at(const GaussianParams& p, double x) {
    const double two_q = 2.0 * p.Q;
    const double u = (x - p.Xplus) / std::sqrt(two_q);
    const double amp = p.hermite_n >= 0 ? hermite_function(p.hermite_n, u)
                                        : kPiQuarter * std::exp(-0.5 * u * u);
    const double phase = p.R * x * x / (2.0 * two_q) + (x - 0.5 * p.Xplus) * p.Xminus / two_q;
    return p.norm * amp * p.phase_root * std::polar(1.0, phase);
}

WaveSample evaluate(const GaussianParams& p, Frame frame, double time, const UniformGrid& grid) {
    grid.validate();
    WaveSample w;
    w.frame = frame;
    w.time = time;
    w.grid = grid;
    w.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) w.values[i] = evaluate_at(p, grid.x(i));
    const double tail = tail_mass(p, grid);
    if (tail > 1e-8) {
        w.warnings.push_back("coverage: estimated probability outside grid " + std::to_string(tail));
    }
    return w;
}

WaveSample state(const Model& model, Frame frame, const StateLabel& label, double time,
                 const UniformGrid& grid, TqRoute route) {
    return evaluate(state_params(model, frame, label, time, route), frame, time, grid);
}

WaveSample number_state(const Model& model, Frame frame, int n, double time, const UniformGrid& grid) {
    return state(model, frame, StateLabel::number(n), time, grid);
}

WaveSample coherent_state(const Model& model, Frame frame, double x0, double p0, double time,
                          const UniformGrid& grid) {
    return state(model, frame, StateLabel::coherent(x0, p0), time, grid);
}

WaveSample squeezed_state(const Model& model, Frame frame, double x0, double p0, double r,
                          double theta, double time, const UniformGrid& grid) {
    return state(model, frame, StateLabel::squeezed(x0, p0, r, theta), time, grid);
}

WaveSample dilation_transform(const WaveSample& tm, double nu, std::optional<UniformGrid> target) {
    if (tm.frame != Frame::tm) throw UsageError("dilation_transform: input must be a TM sample");
    const UniformGrid& src = tm.grid;
    const UniformGrid dst = target.value_or(src);
    dst.validate();
    WaveSample out;
    out.frame = Frame::tq;
    out.time = tm.time;
    out.grid = dst;
    out.values.resize(dst.n);
    const double scale = std::exp(-nu);
    const double amp = std::exp(-0.5 * nu);
    const double dx = src.dx();
    const double slack = 1e-12 * (src.xmax - src.xmin);
    constexpr int kPts = 8;
    for (std::size_t j = 0; j < dst.n; ++j) {
        const double y = dst.x(j) * scale;
        if (y < src.xmin - slack || y > src.xmax + slack) {
            throw CoverageError("dilation_transform: rescaled abscissa " + std::to_string(y) +
                                " leaves the source grid");
        }
        const double pos = (y - src.xmin) / dx;
        long i0 = static_cast<long>(std::floor(pos)) - kPts / 2 + 1;
        i0 = std::clamp(i0, 0L, static_cast<long>(src.n) - kPts);
        cplx acc = 0.0;
        for (int a = 0; a < kPts; ++a) {
            double wgt = 1.0;
            for (int b = 0; b < kPts; ++b) {
                if (b != a) wgt *= (pos - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
            }
            acc += wgt * tm.values[static_cast<std::size_t>(i0 + a)];
        }
        out.values[j] = amp * acc;
    }
    return out;
}

cplx appendix_reference_state(double omega, double x0, double p0, double r, double theta, double x,
                              double t) {
    if (!(omega > 0.0)) throw ValidationError("appendix_reference_state: omega must be positive");
    const double wt = omega * t;
    const double c2 = std::cosh(2.0 * r), s2 = std::sinh(2.0 * r);
    const double den = c2 + std::cos(2.0 * wt - theta) * s2;
    const double center = p0 / omega * std::sin(wt) + x0 * std::cos(wt);

    const double lead = std::pow(omega / std::numbers::pi, 0.25) * std::pow(den, -0.25);
    // Numerator and denominator of the quartic root are conjugate, so the root is
    // e^{-i arg(d)/2} with arg(d) tracked continuously in t.
    const double arg_d =
        wt + std::arg(std::cosh(r) + std::polar(1.0, -(2.0 * wt - theta)) * std::sinh(r));
    const cplx root = std::polar(1.0, -0.5 * arg_d);

    const double gauss = std::exp(-0.5 * omega * (x - center) * (x - center) / den);
    const double chirp = -0.5 * omega * x * x * std::sin(2.0 * wt - theta) * s2 / den;
    const double bracket = p0 / omega * (std::cos(wt) * c2 + std::cos(wt - theta) * s2) -
                           x0 * (std::sin(wt) * c2 - std::sin(wt - theta) * s2);
    const double drift = omega * (x - 0.5 * center) / den * bracket;
    return lead * root * gauss * std::polar(1.0, chirp + drift);
}

std::size_t resolved_nodes(const GaussianParams& p, const UniformGrid& grid, double kdx, std::size_t n_min) {
    const double sq = std::sqrt(p.Q);
    const double nh = p.hermite_n >= 0 ? p.hermite_n : 0;
    const double core = 6.0 * sq + std::sqrt(2.0 * (2.0 * nh + 1.0)) * sq;
    const double chirp = (std::abs(p.R) * (std::abs(p.Xplus) + core) + std::abs(p.Xminus)) / (2.0 * p.Q);
    const double envelope = std::sqrt(2.0 * nh + 2.0) / std::sqrt(2.0 * p.Q) + core / (2.0 * p.Q);
    const double dx = kdx / (chirp + envelope);
    auto n = static_cast<std::size_t>(std::ceil((grid.xmax - grid.xmin) / dx)) + 1;
    n = std::max(n, n_min);
    return n % 2 ? n : n + 1;
}

UniformGrid auto_grid(const GaussianParams& p, std::size_t n) {
    const double sq = std::sqrt(p.Q);
    const double hermite = p.hermite_n >= 0 ? std::sqrt(2.0 * (2.0 * p.hermite_n + 1.0)) * sq : 0.0;
    const double half = 12.0 * sq + hermite;
    return {p.Xplus - half, p.Xplus + half, n};
}

}  // namespace tdho
