#pragma once

#include <string>

#include "confcurv/geom/background.hpp"
#include "confcurv/symfun/sigma.hpp"

namespace confcurv::geom {

/// Which conformal curvature is prescribed: (1/(n-2)) G (einstein) or S^tau (schouten).
struct Mode {
    enum class Kind { einstein, schouten };
    Kind kind = Kind::einstein;
    double tau = 0.0;  // used by schouten only

    static Mode einstein() { return Mode{Kind::einstein, 0.0}; }
    static Mode schouten(double tau) { return Mode{Kind::schouten, tau}; }

    [[nodiscard]] bool is_schouten() const noexcept { return kind == Kind::schouten; }
    /// (n-1)(n-2)/2 for einstein, (n tau + 2 - 2n)/2 for schouten: the constant c
    /// in the blow-up rate u + log d -> (1/2) log c.
    [[nodiscard]] double target_constant(int n) const;
    [[nodiscard]] std::string name() const;
};

/// Eigenvalues of the conformal tensor for radial u, in the g frame: one radial
/// eigenvalue and an (n-1)-fold tangential one.
struct RadialEigen {
    double radial = 0.0;
    double tangential = 0.0;

    [[nodiscard]] symfun::EigenVector assemble(int n) const;
};

/// Constant eigenvalue b of the background part (G_g/(n-2) or S^tau_g) on a
/// background of constant curvature K: -(n-1)K/2 or -K(n tau + 2 - 2n)/(2(n-2)).
[[nodiscard]] double background_eigenvalue(const Background& bg, const Mode& mode);

/// Closed form for radial u with derivatives up, upp at a point where the
/// Hessian of r has tangential eigenvalue `warp` (1/r on flat space), plus the
/// background eigenvalue b:
///   einstein:  radial     = b + (n-1)(w u' + u'^2/2)
///              tangential = b + u'' + (n-2) w u' + (n-3)/2 u'^2
///   schouten:  radial     = b + (tau-1)/(n-2) Lap - u'' + tau/2 u'^2
///              tangential = b + (tau-1)/(n-2) Lap - w u' + (tau-2)/2 u'^2
/// with Lap = u'' + (n-1) w u'.
[[nodiscard]] RadialEigen radial_eigen(double up, double upp, double warp, int n, const Mode& mode,
                                       double background = 0.0);

/// Limit at the centre of a ball (r -> 0 with u'(0) = 0, so w u' -> u''(0)).
/// Both eigenvalues coincide there.
[[nodiscard]] RadialEigen radial_eigen_center(double upp, int n, const Mode& mode, double background = 0.0);

/// d(radial, tangential) / d(u', u'') of radial_eigen (exact; the map is
/// quadratic in u' and linear in u'').
struct RadialEigenPartials {
    double radial_up = 0.0;
    double radial_upp = 0.0;
    double tangential_up = 0.0;
    double tangential_upp = 0.0;
};

[[nodiscard]] RadialEigenPartials radial_eigen_partials(double up, double warp, int n, const Mode& mode);

/// d(radial, tangential) / d u''(0) of radial_eigen_center (the *_up fields are 0).
[[nodiscard]] RadialEigenPartials radial_eigen_center_partials(int n, const Mode& mode);

/// Flat-background version at radius r > 0 (DomainError otherwise), assembled
/// into ascending order.
[[nodiscard]] symfun::EigenVector radial_reduction(double up, double upp, double r, int n, const Mode& mode);

}  // namespace confcurv::geom
