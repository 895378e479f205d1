#pragma once

// Crank-Nicolson oracle for  i psi_t = -1/2 a(t) psi_xx + b(t) x^2 psi  on a Dirichlet box:
//   TO: a = 1, b = g2(t');   TM: a = e^{-2 nu(t)}, b = h2(t) e^{2 nu(t)}.
// Coefficients are sampled at the step midpoint.

#include <cstddef>

#include "tdho/grid.hpp"
#include "tdho/model.hpp"

namespace tdho {

enum class Laplacian {
    second_order,  // 3-point
    compact,       // 4th-order Numerov form (I + d2/12)^{-1} d2 / dx^2, still tridiagonal
};

struct PropagatorConfig {
    Frame frame = Frame::to;
    UniformGrid grid{-12.0, 12.0, 2048};
    double dt = 1e-4;
    Laplacian laplacian = Laplacian::compact;
    double norm_tol = 1e-8;
    double edge_tol = 1e-7;
    /// dt <= max_dt_over_dx * dx; raise it deliberately for time-step studies.
    double max_dt_over_dx = 0.1;

    void validate() const;
};

struct PropagationResult {
    WaveSample final;
    std::size_t steps = 0;
    double norm_drift = 0.0;
};

/// Propagates `initial` (sampled on config.grid at initial.time) to t_final.  The step
/// is shrunk slightly so an integer number of steps lands on t_final.
/// Throws StabilityError on norm drift and CoverageError when |psi| at an edge exceeds edge_tol.
PropagationResult propagate(const PropagatorConfig& config, const Model& model,
                            const WaveSample& initial, double t_final);

struct L2Distance {
    double raw = 0.0;
    /// min over phi of ||a - e^{i phi} b||.
    double phase_aligned = 0.0;
};

L2Distance l2_distance(const WaveSample& a, const WaveSample& b);

}  // namespace tdho
