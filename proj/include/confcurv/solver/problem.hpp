#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "confcurv/geom/background.hpp"
#include "confcurv/geom/radial.hpp"
#include "confcurv/symfun/family.hpp"

namespace confcurv::solver {

using RadialFunction = std::function<double(double r)>;

/// Radial Dirichlet problem f(lambda_{e^{2u} g}(T[u])) = psi / (n-2) with
/// T = G/(n-2) (einstein) or S^tau (schouten), u = boundary_value at the outer
/// boundary and at the inner one when present.
struct ProblemSpec {
    geom::Background bg;
    symfun::OperatorFamily fam;
    geom::Mode mode = geom::Mode::einstein();
    RadialFunction psi = [](double) { return 1.0; };
    double boundary_value = 0.0;
    std::optional<double> inner_boundary_value;  // defaults to boundary_value

    [[nodiscard]] int n() const noexcept { return bg.n; }
    [[nodiscard]] double inner_value() const noexcept { return inner_boundary_value.value_or(boundary_value); }
    /// The transform parameter whose operator carries the second derivatives:
    /// 1 for einstein, (n-2)/(tau-1) for schouten.
    [[nodiscard]] double rho() const noexcept;
    /// True when (bg, fam, mode) agree.
    [[nodiscard]] bool same_equation(const ProblemSpec& other) const noexcept;
};

/// kappa, analytic vartheta and the fully-uniform share bound at rho().
struct EllipticityData {
    int kappa = 0;
    double vartheta = 0.0;
    double rho = 1.0;
    double share_bound = 0.0;
};

/// Throws DomainError naming the first violated condition:
///   dimension:        n >= 3 and fam.n == bg.n
///   positive-cone:    einstein mode needs Gamma != Gamma_n
///   tau-ellipticity:  tau > 1 + (n-2)(1 - kappa vartheta)
///   tau-positivity:   n tau + 2 - 2n > 0
/// (psi > 0 is checked on the grid by the discretization.)
EllipticityData validate(const ProblemSpec& spec);

/// Complete constant-curvature profile on a geodesic ball of the background,
/// scaled to solve the equation with constant psi:
///   u(r) = (1/2) log(c / psi) + log(a P q(rho) / (P^2 - rho^2)),
/// where rho(r) = r, tanh(a r/2) or tan(a r/2), q = 2, 1 - rho^2 or 1 + rho^2
/// (a = sqrt|K|, a P q -> 2P on flat space) and c = mode.target_constant(n).
/// P = rho(R) puts the blow-up at geodesic radius R. The exterior variant uses
/// P / (rho^2 - P^2) and blows up at the inner boundary instead.
struct ModelProfile {
    geom::Background bg;
    double log_scale = 0.0;  // (1/2) log(c / psi)
    double pole = 1.0;       // P
    bool exterior = false;

    /// Profile blowing up at bg.outer.
    static ModelProfile complete(const geom::Background& bg, double c, double psi);
    /// Profile with u(bg.outer) = value (P > rho(outer)).
    static ModelProfile through(const geom::Background& bg, double c, double psi, double value);
    /// Exterior profile with u(bg.inner) = value (P < rho(inner)).
    static ModelProfile through_inner(const geom::Background& bg, double c, double psi, double value);

    [[nodiscard]] double value(double r) const;
};

/// Initial guess for Newton: the model profile through the outer datum with
/// psi = psi(outer); admissible for constant psi on balls by construction.
/// Two-sided domains take the soft maximum (8-norm) of its conformal factor
/// and that of the exterior profile through the inner datum (psi(inner)), with
/// a linear correction so both data hold.
[[nodiscard]] std::vector<double> initial_guess(const ProblemSpec& spec, const std::vector<double>& nodes);

/// Supersolution u~ = complete model with psi = inf psi (nodes sampled) on
/// ball backgrounds; nullopt for two-sided domains.
[[nodiscard]] std::optional<std::vector<double>> supersolution(const ProblemSpec& spec,
                                                               const std::vector<double>& nodes);

}  // namespace confcurv::solver
