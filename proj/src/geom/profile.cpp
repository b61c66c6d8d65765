#include "confcurv/geom/profile.hpp"

#include "confcurv/error.hpp"

namespace confcurv::geom {

Eigen::MatrixXd DistancePoint::shape_term() const {
    const auto n = grad.size();
    return laplacian() * Eigen::MatrixXd::Identity(n, n) - hess;
}

DistancePoint CollarGeometry::at(double d) const {
    if (!(d >= 0.0)) throw DomainError(condition::kProfileDomain, "collar distance must be >= 0");
    if (n < 3) throw DomainError(condition::kDimension, "collar dimension n must be >= 3");
    DistancePoint p;
    p.grad = Eigen::VectorXd::Zero(n);
    p.grad(0) = 1.0;
    p.hess = kappa * (Eigen::MatrixXd::Identity(n, n) - p.conormal());
    return p;
}

CurvatureTensor profile_tensor(double hp, double hpp, const DistancePoint& dp, double tau) {
    const auto n = dp.grad.size();
    const double dn = static_cast<double>(n);
    const double c = (tau - 1.0) / (dn - 2.0);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    CurvatureTensor t;
    t.components = (c * hpp + 0.5 * (tau - 2.0) * hp * hp) * dp.grad_sq() * id +
                   hp * (c * dp.laplacian() * id - dp.hess) + (hp * hp - hpp) * dp.conormal();
    t.kind = TensorKind::profile;
    t.tau = tau;
    return t;
}

CurvatureTensor U_of_profile(double hp, double hpp, double grad_d_sq, const Eigen::MatrixXd& shape_term,
                             const Eigen::MatrixXd& conormal) {
    const auto n = shape_term.rows();
    const double dn = static_cast<double>(n);
    CurvatureTensor t;
    t.components = (hpp + 0.5 * (dn - 3.0) * hp * hp) * grad_d_sq * Eigen::MatrixXd::Identity(n, n) +
                   (hp * hp - hpp) * conormal + hp * shape_term;
    t.kind = TensorKind::profile;
    t.tau = dn - 1.0;
    return t;
}

}  // namespace confcurv::geom
