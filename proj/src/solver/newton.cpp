#include "confcurv/solver/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::solver {

namespace {

struct Tracker {
    double margin = 1e300;
    int trace_failures = 0;

    void observe(const Discretization& disc, const NodalState& st) {
        const LinearDiagnostics d = disc.diagnostics(st);
        margin = std::min(margin, d.min_share - d.share_bound);
        trace_failures += d.trace_inequality_failures;
    }
};

// Residual noise from evaluating the stencils in floating point:
// 16 eps max_i sum_j |J_ij| |u_j|.
double rounding_floor(const Tridiagonal& j, const std::vector<double>& u) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double row = std::abs(j.diag[i] * u[i]);
        if (i > 0) row += std::abs(j.lower[i - 1] * u[i - 1]);
        if (i + 1 < u.size()) row += std::abs(j.upper[i] * u[i + 1]);
        worst = std::max(worst, row);
    }
    return 16.0 * std::numeric_limits<double>::epsilon() * worst;
}

}  // namespace

SolveRecord newton_solve(const Discretization& disc, std::vector<double> u0, const NewtonOptions& options) {
    NodalState st;
    try {
        st = disc.evaluate(u0);
    } catch (const AdmissibilityError& e) {
        throw DomainError(condition::kConeMembership, std::string("initial guess is not admissible: ") + e.what());
    }
    if (!(st.min_slack >= options.cone_floor)) {
        throw DomainError(condition::kConeMembership, "initial guess is too close to the cone boundary");
    }
    const std::vector<double> start = u0;
    std::vector<double> u = std::move(u0);
    Tracker tracker;
    tracker.observe(disc, st);

    SolveRecord rec;
    rec.effective_tolerance = options.tolerance;
    int it = 0;
    while (st.residual_norm > options.tolerance) {
        if (it >= options.max_iterations) {
            throw NonconvergenceError("Newton reached " + std::to_string(it) + " iterations with residual " +
                                          std::to_string(st.residual_norm),
                                      it, st.residual_norm);
        }
        const Tridiagonal jac = disc.jacobian(u, st);
        const double floor = rounding_floor(jac, u);
        if (st.residual_norm <= floor) {
            rec.effective_tolerance = floor;
            break;
        }
        ++it;
        std::vector<double> step = st.residual;
        for (double& v : step) v = -v;
        jac.solve(step);

        bool accepted = false;
        std::vector<double> trial(u.size());
        for (double t = 1.0; t >= options.min_step; t *= 0.5) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * step[i];
            try {
                NodalState next = disc.evaluate(trial);
                if (next.min_slack >= options.cone_floor && next.residual_norm < st.residual_norm) {
                    u.swap(trial);
                    st = std::move(next);
                    accepted = true;
                    break;
                }
            } catch (const AdmissibilityError&) {
                // Left the cone; halve the step.
            }
        }
        if (!accepted) {
            if (options.restart && rec.restarts == 0) {
                ++rec.restarts;
                for (std::size_t i = 0; i < u.size(); ++i) trial[i] = 0.5 * (u[i] + start[i]);
                try {
                    NodalState blended = disc.evaluate(trial);
                    if (blended.min_slack >= options.cone_floor) {
                        u.swap(trial);
                        st = std::move(blended);
                        continue;
                    }
                } catch (const AdmissibilityError&) {
                }
                u = start;
                st = disc.evaluate(u);
                continue;
            }
            throw NonconvergenceError("line search stalled (step below 2^-30) with residual " +
                                          std::to_string(st.residual_norm),
                                      it, st.residual_norm);
        }
        tracker.observe(disc, st);
    }

    rec.u = std::move(u);
    rec.k = std::exp(disc.spec().boundary_value);
    rec.newton_iters = it;
    rec.residual_norm = st.residual_norm;
    rec.admissible = true;
    rec.min_cone_slack = st.min_slack;
    rec.ellipticity_margin = tracker.margin;
    rec.trace_inequality_failures = tracker.trace_failures;
    return rec;
}

}  // namespace confcurv::solver
