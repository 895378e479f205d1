#pragma once

// Number, coherent and squeezed wavefunctions in the TO, TM and TQ frames.
//
// All nine state/frame combinations share one template
//
//   psi(x) = (2Q)^{-1/4} A(u) root exp(i [R x^2/(4Q) + (x - X+/2) X-/(2Q)]),
//   u = (x - X+)/sqrt(2Q),
//
// with A(u) = pi^{-1/4} e^{-u^2/2} for coherent/squeezed states and the normalized
// Hermite function h_n(u) for number states (X+ = X- = 0).  Frames differ only in the
// complex pair (P, Xc) that feeds Q, R, X+, X-:
//   TO: (xi, xi'),  TM: (xi_hat, xi_dot_hat),  TQ: (xi_hat e^{nu}, xi_dot_hat e^{-nu}).

#include <complex>
#include <cstddef>
#include <optional>

#include "tdho/grid.hpp"
#include "tdho/model.hpp"

namespace tdho {

enum class StateKind { number, coherent, squeezed };

const char* to_string(StateKind k);
StateKind state_kind_from_string(const std::string& s);

struct StateLabel {
    StateKind kind = StateKind::number;
    int n = 0;
    double x0 = 0.0, p0 = 0.0;
    double r = 0.0, theta = 0.0;  // z = r e^{i theta}

    static StateLabel number(int n) { return {StateKind::number, n, 0, 0, 0, 0}; }
    static StateLabel coherent(double x0, double p0) { return {StateKind::coherent, 0, x0, p0, 0, 0}; }
    static StateLabel squeezed(double x0, double p0, double r, double theta) {
        return {StateKind::squeezed, 0, x0, p0, r, theta};
    }
    /// Throws ValidationError for n < 0 or r < 0.
    void validate() const;
};

/// Frame-specific generator data at one instant.
struct FrameQuantities {
    Frame frame = Frame::to;
    double time = 0.0;
    cplx p;        // coefficient of d/dx in J-
    cplx xc;       // coefficient of -i x in J-
    double theta;  // continuous arg p
    double g2 = 0.0;  // d(xc)/dt' = -2 g2 p (TO clock stiffness)
    double nu = 0.0;
    double nu_dot = 0.0;
    double h2 = 0.0;
};

FrameQuantities frame_quantities(const Model& model, Frame frame, double time);
/// Initial time of a frame: t0' for TO, t0 for TM and TQ.
double initial_time(const Model& model, Frame frame);
/// Times at which states of a frame can be evaluated.
Interval frame_time_range(const Model& model, Frame frame);

/// alpha = i (P0 p0 - Xc0 x0) with (P0, Xc0) the frame pair at the initial time.
cplx alpha_from_phase_space(const Model& model, Frame frame, double x0, double p0);

struct GaussianParams {
    double Q = 0.0, R = 0.0;
    double Xplus = 0.0, Xminus = 0.0, Yminus = 0.0;
    cplx phase_root{1.0, 0.0};
    double norm = 0.0;  // (2Q)^{-1/4}
    int hermite_n = -1;  // >= 0 for number states

    /// Imaginary parts of the complex expressions before truncation.
    struct {
        double Q = 0.0, R = 0.0, Xplus = 0.0, Xminus = 0.0, Yminus = 0.0;
    } imag;
};

/// Parameters from a frame pair.  `gamma_form` evaluates Q and R through
/// (P + g conj P)(conj P + conj g P)/(1 - |g|^2) instead of the cosh/sinh expansion.
GaussianParams gaussian_params(const FrameQuantities& fq, const StateLabel& label, cplx alpha,
                               bool gamma_form = false);

/// TM parameters -> TQ parameters under psi(x) -> e^{-nu/2} psi(x e^{-nu}).
GaussianParams dilate(const GaussianParams& p, double nu);

/// How TQ states are produced: dilation of the TM closed form, or the direct TQ formulas.
enum class TqRoute { dilation, direct };

GaussianParams state_params(const Model& model, Frame frame, const StateLabel& label, double time,
                            TqRoute route = TqRoute::dilation);

cplx evaluate_at(const GaussianParams& p, double x);
WaveSample evaluate(const GaussianParams& p, Frame frame, double time, const UniformGrid& grid);

WaveSample state(const Model& model, Frame frame, const StateLabel& label, double time,
                 const UniformGrid& grid, TqRoute route = TqRoute::dilation);
WaveSample number_state(const Model& model, Frame frame, int n, double time, const UniformGrid& grid);
WaveSample coherent_state(const Model& model, Frame frame, double x0, double p0, double time,
                          const UniformGrid& grid);
WaveSample squeezed_state(const Model& model, Frame frame, double x0, double p0, double r,
                          double theta, double time, const UniformGrid& grid);

/// Resamples a TM sample at x e^{-nu} (8-point Lagrange) and scales by e^{-nu/2}.
/// Throws CoverageError when x e^{-nu} leaves the source grid.
WaveSample dilation_transform(const WaveSample& tm, double nu,
                              std::optional<UniformGrid> target = std::nullopt);

/// Closed-form harmonic squeezed state, independent of the auxiliary solver.
cplx appendix_reference_state(double omega, double x0, double p0, double r, double theta,
                              double x, double t);

/// Grid centred on X+ with half-width 12 sqrt(Q) (about 8.5 packet widths) plus a Hermite allowance.
UniformGrid auto_grid(const GaussianParams& p, std::size_t n = 1025);

/// Odd node count for `grid`'s extent such that the largest local wavenumber inside the
/// packet core times dx stays below `kdx`; never less than `n_min`.
std::size_t resolved_nodes(const GaussianParams& p, const UniformGrid& grid, double kdx = 0.05,
                           std::size_t n_min = 1025);

/// Normalized Hermite function h_n(u).
double hermite_function(int n, double u);

}  // namespace tdho
