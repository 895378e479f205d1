#pragma once

// Finite-difference realizations of the oscillator-algebra generators
//
//   J- = P d/dx - i Xc x,   J+ = -conj(P) d/dx + i conj(Xc) x,
//   M  = cT i d/dt - cD D + cX2 x^2,   D = -i (x d/dx + 1/2),
//
// with (P, Xc) the frame pair of states.hpp and frame-specific (cT, cD, cX2).

#include <cstddef>
#include <functional>
#include <vector>

#include "tdho/grid.hpp"
#include "tdho/model.hpp"
#include "tdho/states.hpp"

namespace tdho {

/// 4th-order centred first and second x-derivatives; values beyond the grid are zero.
std::vector<cplx> d_dx(const WaveSample& w);
std::vector<cplx> d2_dx2(const WaveSample& w);
/// 2nd-order variants, used for stencil-error estimates.
std::vector<cplx> d_dx_2nd(const WaveSample& w);

struct OperatorCoefficients {
    Frame frame = Frame::to;
    double time = 0.0;
    cplx p, xc;  // J-: p d/dx - i xc x
    double cT = 0.0, cD = 0.0, cX2 = 0.0;
    /// Schroedinger operator  a d2/dx2 + 2i d/dt + b D - c x^2.
    double s_a = 1.0, s_b = 0.0, s_c = 0.0;
    /// TQ only: C3T, C3D, C3X2 as tabulated for the quadratic frame.
    double C3T = 0.0, C3D = 0.0, C3X2 = 0.0;
};

OperatorCoefficients operator_coefficients(const Model& model, Frame frame, double time);

/// Residuals of C3T = 2|XiP|^2 and C3X2 = h2 C3T - |XiX|^2 against their
/// auxiliary-function definitions (TQ only).
struct TqIdentityResiduals {
    double c3t = 0.0, c3x2 = 0.0, c3d = 0.0;
};
TqIdentityResiduals tq_identity_residuals(const Model& model, double t);

/// Samples of one state at t + k delta for the offsets k; centred when the time
/// range allows it, one-sided near its ends.
struct WaveStencil {
    double delta = 0.0;
    std::vector<int> offsets;
    std::vector<WaveSample> samples;
    std::size_t center_index = 0;

    const WaveSample& center() const { return samples[center_index]; }
    /// d/dt at the centre.
    std::vector<cplx> time_derivative() const;
};

struct TimeStencil {
    int order = 4;
    /// Step as a fraction of the local period 2 pi / local_rate.
    double relative_delta = 5e-5;
};

using WaveFactory = std::function<WaveSample(double time)>;

/// `order` is 2 or 4; `range` bounds the admissible sample times.
WaveStencil make_stencil(const WaveFactory& f, double time, double delta, int order = 4,
                         Interval range = {});
WaveStencil state_stencil(const Model& model, Frame frame, const StateLabel& label, double time,
                          const UniformGrid& grid, const TimeStencil& ts = {});
/// Fastest local angular rate in the frame clock: phase rate 1/phi3, sqrt(2|g2|),
/// |phi3'|/phi3, all scaled by dt'/dt, plus |nu'| for the mass clock.
double local_rate(const Model& model, Frame frame, double time);
double stencil_delta(const Model& model, Frame frame, double time, const TimeStencil& ts);

enum class Ladder { raising, lowering };

/// J+ or J- applied at the sample's own time.  Adds a warning when a 2nd-order
/// Richardson estimate of the stencil error exceeds `warn_tol` relative.
WaveSample apply_ladder(const Model& model, Ladder dir, const WaveSample& w, double warn_tol = 1e-5);
WaveSample apply_number_operator(const Model& model, const WaveStencil& s);
/// C = J+ J- - M.
WaveSample apply_casimir(const Model& model, const WaveStencil& s);

/// ||S psi|| / ||psi|| for the frame's Schroedinger operator.
double schrodinger_residual(const Model& model, const WaveStencil& s);
double schrodinger_residual(const Model& model, Frame frame, const StateLabel& label, double time,
                            const UniformGrid& grid, const TimeStencil& ts = {});

enum class Commutator { m_jplus, m_jminus, jminus_jplus };
const char* to_string(Commutator c);

/// ||([A, B] - expected) psi|| / ||psi|| with expected +J+, -J-, or I.
double commutator_check(const Model& model, Commutator which, const WaveStencil& probe);

/// Relative residual of (J- - g J+) psi = (alpha - g conj(alpha)) psi, g = e^{i theta} tanh r.
double squeeze_eigen_check(const Model& model, Frame frame, double x0, double p0, double r,
                           double theta, double time, const UniformGrid& grid);

/// Simpson quadrature of conj(a) b.  Throws UsageError on mismatched grids.
cplx inner_product(const WaveSample& a, const WaveSample& b);
double l2_norm(const WaveSample& a);
/// ||a - c b|| / ||a|| for a complex scalar c.
double relative_residual(const WaveSample& a, const WaveSample& b, cplx c = 1.0);

}  // namespace tdho
