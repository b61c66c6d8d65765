#pragma once

#include <Eigen/Dense>

#include "confcurv/geom/tensor.hpp"

namespace confcurv::geom {

/// First and second derivatives of the boundary distance d at a collar point,
/// in an orthonormal frame whose first vector is the inward normal.
struct DistancePoint {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;

    [[nodiscard]] double grad_sq() const { return grad.squaredNorm(); }
    [[nodiscard]] double laplacian() const { return hess.trace(); }
    /// Delta d g - Hess d.
    [[nodiscard]] Eigen::MatrixXd shape_term() const;
    /// dd (x) dd.
    [[nodiscard]] Eigen::MatrixXd conormal() const { return grad * grad.transpose(); }
};

/// Desk-scale collar model: |grad d| = 1 and Hess d = kappa (g - dd (x) dd) with a
/// constant tangential curvature kappa. Then Delta d g - Hess d has eigenvalue
/// (n-1) kappa along the normal and (n-2) kappa tangentially; kappa = 0 is the
/// flat half-space.
struct CollarGeometry {
    int n = 3;
    double kappa = 0.0;

    static CollarGeometry flat_half_space(int n) { return CollarGeometry{n, 0.0}; }
    /// Shape term Delta d g - Hess d with largest eigenvalue `norm` (sign kept).
    static CollarGeometry with_shape_norm(int n, double norm) { return CollarGeometry{n, norm / (n - 1.0)}; }

    [[nodiscard]] DistancePoint at(double d) const;
};

/// S^tau of e^{2h(d)} g minus the background part, for u = h(d):
///   [(tau-1)/(n-2) h'' + (tau-2)/2 h'^2] |grad d|^2 g
///     + h' ((tau-1)/(n-2) Delta d g - Hess d) + (h'^2 - h'') dd (x) dd.
[[nodiscard]] CurvatureTensor profile_tensor(double hp, double hpp, const DistancePoint& dp, double tau);

/// U[h] = (h'' + (n-3)/2 h'^2) |grad d|^2 g + (h'^2 - h'') dd (x) dd + h' (Delta d g - Hess d),
/// i.e. profile_tensor at tau = n - 1.
[[nodiscard]] CurvatureTensor U_of_profile(double hp, double hpp, double grad_d_sq, const Eigen::MatrixXd& shape_term,
                                           const Eigen::MatrixXd& conormal);

}  // namespace confcurv::geom
