#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "confcurv/solver/newton.hpp"

namespace confcurv::solver {

struct ContinuationOptions {
    NewtonOptions newton;
    double monotone_tolerance = 1e-8;
    /// Nodes with d >= interior_distance * (outer - inner) form the interior set.
    double interior_distance = 0.2;
};

struct ContinuationResult {
    std::vector<SolveRecord> records;
    std::optional<std::size_t> failure_index;
    std::string failure_message;

    bool monotone = true;                  // u_k <= u_{k'} + tol for consecutive k < k'
    double worst_monotone_violation = 0.0;  // max (u_k - u_{k'})
    std::optional<bool> below_supersolution;
    double worst_supersolution_violation = 0.0;  // max (u_k - u~)

    /// Interior sup |u_{k'} - u_k| for consecutive pairs.
    std::vector<double> interior_change;
    /// Richardson estimate of u_infinity: polynomial extrapolation in 1/k to 0
    /// through the last three records (two if only two exist); +inf at
    /// Dirichlet nodes. Empty with fewer than two records.
    std::vector<double> u_infinity;

    [[nodiscard]] bool ok() const noexcept { return !failure_index; }
};

/// Parses "start:end:xratio" (e.g. "2:1024:x2") into start, start*ratio, ...,
/// stopping at end. Throws DomainError (range) on malformed input.
[[nodiscard]] std::vector<double> parse_k_list(const std::string& text);

/// Solves u = log k on the boundary for each k (ascending, k_0 >= 1), warm
/// starting each solve from the previous one shifted by the change of the model
/// profile. Failures stop the sequence and are reported, not thrown.
[[nodiscard]] ContinuationResult continuation(const Discretization& base, const std::vector<double>& k_list,
                                              const ContinuationOptions& options = {});

struct AsymptoticFit {
    double limit_estimate = 0.0;  // a in v(d) = u + log d ~ a + b d
    double slope = 0.0;
    double fit_residual = 0.0;  // RMS residual of the fit
    int nodes_used = 0;
    double target = 0.0;  // (1/2) log(c / psi(outer))
    [[nodiscard]] double deviation() const noexcept { return limit_estimate - target; }
};

/// Least-squares fit of u + log d on the nodes nearest the outer boundary:
/// the Dirichlet node and nodes with k d < 16 are skipped (k may be +inf),
/// then the next 20% of the outer side's nodes are used. Schouten mode requires
/// tau >= 2. Throws DomainError (range) when fewer than 8 nodes qualify.
[[nodiscard]] AsymptoticFit asymptotic_extract(const Discretization& disc, const std::vector<double>& u,
                                               double k_cutoff);

struct BandReport {
    double width = 0.0;           // (1/2)(sup log psi - inf log psi) over the boundary
    double min_difference = 0.0;  // min (w - u) over interior nodes
    double max_difference = 0.0;  // max (w - u)
    bool holds = false;
};

/// u <= w <= u + width (within tol) nodewise away from Dirichlet nodes.
/// Throws DomainError when the two specs describe different equations.
[[nodiscard]] BandReport uniqueness_band(const Discretization& disc_u, const std::vector<double>& u,
                                         const Discretization& disc_w, const std::vector<double>& w,
                                         double tol = 1e-7);

}  // namespace confcurv::solver
