#pragma once

#include <optional>
#include <vector>

#include "confcurv/solver/discretization.hpp"

namespace confcurv::solver {

struct NewtonOptions {
    double tolerance = 1e-10;  // sup norm of the residual
    int max_iterations = 50;
    double min_step = 0x1p-30;
    double cone_floor = 1e-12;  // minimum cone slack of an accepted iterate
    bool restart = true;        // one restart from a 50% blend with u0 after a stall
};

struct SolveRecord {
    std::vector<double> u;
    double k = 0.0;
    int newton_iters = 0;
    double residual_norm = 0.0;
    bool admissible = false;
    double min_cone_slack = 0.0;
    std::optional<double> asymptotic_estimate;
    int restarts = 0;
    /// The tolerance actually met: options.tolerance, or the rounding floor
    /// 16 eps max_i sum_j |J_ij| |u_j| when that is larger and was reached.
    double effective_tolerance = 0.0;
    /// Worst (share - bound) over accepted iterates; >= -1e-8 expected.
    double ellipticity_margin = 0.0;
    /// Trace-inequality failures over accepted iterates; 0 expected.
    int trace_inequality_failures = 0;
};

/// Damped Newton from u0 (must be admissible, with Dirichlet entries already
/// equal to the data). Converges at residual <= tolerance, or at the rounding
/// floor when stencil rounding on fine grids exceeds the tolerance. Steps are halved until the residual sup norm decreases
/// and every interior node keeps cone slack >= cone_floor. Throws
/// NonconvergenceError after a stall (step < min_step) past the restart, or
/// when max_iterations is reached above tolerance.
[[nodiscard]] SolveRecord newton_solve(const Discretization& disc, std::vector<double> u0,
                                       const NewtonOptions& options = {});

}  // namespace confcurv::solver
