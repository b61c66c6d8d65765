#include "confcurv/solver/discretization.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "confcurv/error.hpp"
#include "confcurv/symfun/family.hpp"

namespace confcurv::solver {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void Tridiagonal::solve(std::vector<double>& rhs) const {
    const auto n = static_cast<lapack_int>(diag.size());
    std::vector<double> dl = lower;
    std::vector<double> d = diag;
    std::vector<double> du = upper;
    const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), rhs.data(), n);
    if (info != 0) {
        throw NonconvergenceError("tridiagonal Jacobian is singular (gtsv info " + std::to_string(info) + ")", 0,
                                  kNaN);
    }
}

Discretization::Discretization(ProblemSpec spec, Grid1D grid)
    : spec_(std::move(spec)), grid_(std::move(grid)), ell_(validate(spec_)), cone_(spec_.fam.natural_cone()) {
    const auto& r = grid_.nodes;
    if (r.size() < 33) throw DomainError(condition::kRange, "grid needs at least 33 nodes");
    if (r.front() < spec_.bg.inner - 1e-14 || r.back() > spec_.bg.outer + 1e-14) {
        throw DomainError(condition::kRange, "grid nodes leave the background's radial range");
    }
    if (grid_.centre_node != !spec_.bg.has_inner_boundary()) {
        throw DomainError(condition::kRange, "grid and background disagree on the centre node");
    }
    background_ = geom::background_eigenvalue(spec_.bg, spec_.mode);
    const std::size_t m = r.size();
    stencil_.resize(m);
    warp_.assign(m, 0.0);
    psi_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        psi_[i] = spec_.psi(r[i]);
        if (!(psi_[i] > 0.0) || !std::isfinite(psi_[i])) {
            throw DomainError(condition::kRange, "psi must be positive and finite; psi(" + std::to_string(r[i]) +
                                                     ") = " + std::to_string(psi_[i]));
        }
        if (grid_.is_dirichlet(i)) continue;
        Stencil& s = stencil_[i];
        if (i == 0) {
            // Symmetric ghost node u_{-1} = u_1.
            const double h = r[1] - r[0];
            s.b[1] = -2.0 / (h * h);
            s.b[2] = 2.0 / (h * h);
            continue;
        }
        if (!(r[i] > r[i - 1] && r[i + 1] > r[i])) throw DomainError(condition::kRange, "grid nodes must increase");
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        const double sum = hm + hp;
        s.a[0] = -hp / (hm * sum);
        s.a[2] = hm / (hp * sum);
        s.a[1] = -(s.a[0] + s.a[2]);
        s.b[0] = 2.0 / (hm * sum);
        s.b[2] = 2.0 / (hp * sum);
        s.b[1] = -(s.b[0] + s.b[2]);
        warp_[i] = spec_.bg.warp(r[i]);
    }
}

std::pair<double, double> Discretization::derivatives(std::span<const double> u, std::size_t i) const {
    const Stencil& s = stencil_[i];
    // Difference form: constants give exactly zero.
    if (i == 0) return {0.0, s.b[2] * (u[1] - u[0])};
    const double dm = u[i - 1] - u[i];
    const double dp = u[i + 1] - u[i];
    return {s.a[0] * dm + s.a[2] * dp, s.b[0] * dm + s.b[2] * dp};
}

NodalState Discretization::evaluate(std::span<const double> u) const {
    const std::size_t m = size();
    const int n = this->n();
    const auto nn = static_cast<std::size_t>(n);
    if (u.size() != m) throw DomainError(condition::kRange, "state size differs from the grid");

    NodalState st;
    st.residual.assign(m, 0.0);
    st.lambda.assign(m * nn, kNaN);
    st.value.assign(m, kNaN);
    st.grad.assign(m * nn, kNaN);
    st.slack.assign(m, kNaN);

    // Interior nodes go through the batched (SIMD) family evaluation in SoA layout.
    std::vector<std::size_t> interior;
    interior.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!grid_.is_dirichlet(i)) interior.push_back(i);
    }
    const std::size_t count = interior.size();
    std::vector<double> soa(nn * count);
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t i = interior[s];
        const auto [up, upp] = derivatives(u, i);
        const geom::RadialEigen e = (i == 0 && grid_.centre_node)
                                        ? geom::radial_eigen_center(upp, n, spec_.mode, background_)
                                        : geom::radial_eigen(up, upp, warp_[i], n, spec_.mode, background_);
        const double scale = std::exp(-2.0 * u[i]);
        soa[s] = scale * e.radial;
        for (std::size_t a = 1; a < nn; ++a) soa[a * count + s] = scale * e.tangential;
    }
    const symfun::FamilyBatch batch = symfun::f_evaluate_batch(spec_.fam, count, soa);

    st.min_slack = std::numeric_limits<double>::infinity();
    std::vector<double> lam(nn);
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t i = interior[s];
        for (std::size_t a = 0; a < nn; ++a) lam[a] = soa[a * count + s];
        const double slack = symfun::cone_slack(lam, cone_);
        if (!batch.inside[s] || !(slack > 0.0)) {
            throw AdmissibilityError(i, slack,
                                     "eigenvalues leave the cone at node " + std::to_string(i) +
                                         " (r=" + std::to_string(grid_.nodes[i]) + ", slack " +
                                         std::to_string(slack) + ")");
        }
        st.slack[i] = slack;
        st.min_slack = std::min(st.min_slack, slack);
        st.value[i] = batch.value[s];
        st.residual[i] = batch.value[s] - psi_[i] / (n - 2.0);
        for (std::size_t a = 0; a < nn; ++a) {
            st.lambda[i * nn + a] = lam[a];
            st.grad[i * nn + a] = batch.grad[a * count + s];
        }
    }
    st.residual.back() = u.back() - spec_.boundary_value;
    if (!grid_.centre_node) st.residual.front() = u.front() - spec_.inner_value();

    st.residual_norm = 0.0;
    for (double v : st.residual) st.residual_norm = std::max(st.residual_norm, std::abs(v));
    return st;
}

Tridiagonal Discretization::jacobian(std::span<const double> u, const NodalState& st) const {
    const std::size_t m = size();
    const int n = this->n();
    const auto nn = static_cast<std::size_t>(n);
    Tridiagonal j;
    j.lower.assign(m - 1, 0.0);
    j.diag.assign(m, 0.0);
    j.upper.assign(m - 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (grid_.is_dirichlet(i)) {
            j.diag[i] = 1.0;
            continue;
        }
        const double scale = std::exp(-2.0 * u[i]);
        const double g_rad = st.grad[i * nn];
        double g_tan = 0.0;
        for (std::size_t a = 1; a < nn; ++a) g_tan += st.grad[i * nn + a];
        const bool centre = i == 0 && grid_.centre_node;
        const geom::RadialEigenPartials p =
            centre ? geom::radial_eigen_center_partials(n, spec_.mode)
                   : geom::radial_eigen_partials(derivatives(u, i).first, warp_[i], n, spec_.mode);
        // Chain rule through lambda = e^{-2u} mu; Euler's identity turns the
        // d/du_i of the scale into -2 f.
        const double c_up = scale * (g_rad * p.radial_up + g_tan * p.tangential_up);
        const double c_upp = scale * (g_rad * p.radial_upp + g_tan * p.tangential_upp);
        const Stencil& s = stencil_[i];
        if (i > 0) j.lower[i - 1] = c_up * s.a[0] + c_upp * s.b[0];
        j.diag[i] = c_up * s.a[1] + c_upp * s.b[1] - 2.0 * st.value[i];
        j.upper[i] = c_up * s.a[2] + c_upp * s.b[2];
    }
    return j;
}

LinearDiagnostics Discretization::diagnostics(const NodalState& st) const {
    const int n = this->n();
    const auto nn = static_cast<std::size_t>(n);
    const double rho = ell_.rho;
    LinearDiagnostics d;
    d.share_bound = ell_.share_bound;
    d.min_share = std::numeric_limits<double>::infinity();
    d.min_gradient = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i) {
        if (grid_.is_dirichlet(i)) continue;
        const double* g = &st.grad[i * nn];
        const double* l = &st.lambda[i * nn];
        double sum_f = 0.0;
        double euler = 0.0;
        double trace_l = 0.0;
        double min_f = std::numeric_limits<double>::infinity();
        double max_f = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < nn; ++a) {
            sum_f += g[a];
            euler += g[a] * l[a];
            trace_l += l[a];
            min_f = std::min(min_f, g[a]);
            max_f = std::max(max_f, g[a]);
        }
        // F = diag(f_a) in the radial frame, so tr F is the same sum taken in
        // the opposite order.
        double tr = 0.0;
        for (std::size_t a = nn; a-- > 0;) tr += g[a];
        d.trace_error = std::max(d.trace_error, std::abs(sum_f - tr));
        d.euler_error = std::max(d.euler_error, std::abs(euler - st.value[i]) / std::max(1.0, st.value[i]));
        d.min_gradient = std::min(d.min_gradient, min_f);
        const double worst = rho > 0.0 ? max_f : min_f;
        d.min_share = std::min(d.min_share, (sum_f - rho * worst) / ((n - rho) * sum_f));
        if (trace_l < n * st.value[i] - 1e-12 * std::max(1.0, std::abs(trace_l))) ++d.trace_inequality_failures;
    }
    return d;
}

Discretization Discretization::with_boundary(double outer, std::optional<double> inner) const {
    Discretization copy = *this;
    copy.spec_.boundary_value = outer;
    copy.spec_.inner_boundary_value = inner;
    return copy;
}

std::vector<double> residual(const ProblemSpec& spec, const Grid1D& grid, std::span<const double> u) {
    return Discretization(spec, grid).evaluate(u).residual;
}

Tridiagonal linearize(const ProblemSpec& spec, const Grid1D& grid, std::span<const double> u) {
    const Discretization disc(spec, grid);
    return disc.jacobian(u, disc.evaluate(u));
}

}  // namespace confcurv::solver
