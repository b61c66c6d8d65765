#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "confcurv/solver/grid.hpp"
#include "confcurv/solver/problem.hpp"
#include "confcurv/symfun/cone.hpp"

namespace confcurv::solver {

/// Per-node state of one residual evaluation. Interior rows hold
///   R_i = f(e^{-2u_i} mu_i) - psi(r_i)/(n-2),
/// with mu_i the g-frame eigenvalues (radial first, then the (n-1)-fold
/// tangential one) built from second-order finite differences; Dirichlet rows
/// hold u_i - datum.
struct NodalState {
    std::vector<double> residual;
    std::vector<double> lambda;  // e^{-2u} mu, node-major: lambda[i * n + a]
    std::vector<double> value;   // f(lambda); NaN at Dirichlet nodes
    std::vector<double> grad;    // f_a(lambda), node-major like lambda
    std::vector<double> slack;   // cone_slack(lambda); NaN at Dirichlet nodes
    double residual_norm = 0.0;  // sup norm
    double min_slack = 0.0;      // over interior nodes
};

struct Tridiagonal {
    std::vector<double> lower;  // J(i, i-1), size N-1
    std::vector<double> diag;   // J(i, i),   size N
    std::vector<double> upper;  // J(i, i+1), size N-1

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
    /// Solves J x = rhs in place (LAPACK gtsv). Throws NonconvergenceError when singular.
    void solve(std::vector<double>& rhs) const;
};

/// Linearization diagnostics, taken over interior nodes.
struct LinearDiagnostics {
    /// max |sum f_a lambda_a - f| / max(1, f): Euler's identity for degree-one f.
    double euler_error = 0.0;
    /// max |sum_a f_a - tr(F)| with F = diag(f_a) in the radial frame.
    double trace_error = 0.0;
    /// min over nodes and a of (sum f - rho f_a) / ((n - rho) sum f).
    double min_share = 0.0;
    double share_bound = 0.0;
    double min_gradient = 0.0;  // min f_a
    /// Nodes where sum lambda < n f(lambda) beyond rounding.
    int trace_inequality_failures = 0;
};

/// Precomputed stencils, warps, psi values and cone data for one
/// (spec, grid) pair. Immutable after construction; safe to share.
class Discretization {
public:
    /// Validates the spec and the grid (psi > 0 at every node).
    Discretization(ProblemSpec spec, Grid1D grid);

    [[nodiscard]] const ProblemSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const Grid1D& grid() const noexcept { return grid_; }
    [[nodiscard]] const EllipticityData& ellipticity() const noexcept { return ell_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }
    [[nodiscard]] int n() const noexcept { return spec_.n(); }

    /// Throws AdmissibilityError (index = node, slack = cone slack) at the first
    /// interior node whose eigenvalues leave the cone.
    [[nodiscard]] NodalState evaluate(std::span<const double> u) const;

    /// Analytic tridiagonal Jacobian at an admissible state.
    [[nodiscard]] Tridiagonal jacobian(std::span<const double> u, const NodalState& state) const;

    [[nodiscard]] LinearDiagnostics diagnostics(const NodalState& state) const;

    /// Same discretization, new Dirichlet data.
    [[nodiscard]] Discretization with_boundary(double outer, std::optional<double> inner = std::nullopt) const;

    /// Finite-difference u'(r_i), u''(r_i) (0 and the symmetric stencil at the centre).
    [[nodiscard]] std::pair<double, double> derivatives(std::span<const double> u, std::size_t i) const;

private:
    struct Stencil {
        double a[3] = {0, 0, 0};  // u' weights for i-1, i, i+1
        double b[3] = {0, 0, 0};  // u'' weights
    };

    ProblemSpec spec_;
    Grid1D grid_;
    EllipticityData ell_;
    symfun::ConeSpec cone_;
    double background_ = 0.0;
    std::vector<Stencil> stencil_;
    std::vector<double> warp_;
    std::vector<double> psi_;
};

/// Residual vector of the discretized problem.
[[nodiscard]] std::vector<double> residual(const ProblemSpec& spec, const Grid1D& grid, std::span<const double> u);

/// Tridiagonal Jacobian of `residual`.
[[nodiscard]] Tridiagonal linearize(const ProblemSpec& spec, const Grid1D& grid, std::span<const double> u);

}  // namespace confcurv::solver
