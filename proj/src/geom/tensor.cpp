#include "confcurv/geom/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::geom {

namespace {

void require_n_at_least_3(int n) {
    if (n < 3) throw DomainError(condition::kDimension, "conformal formulas need n >= 3");
}

void require_same_size(const CurvatureTensor& t, const ConformalFactorSample& cf) {
    if (t.n() != cf.n() || cf.hess.rows() != cf.n() || cf.hess.cols() != cf.n()) {
        throw DomainError(condition::kDimension, "tensor and conformal factor dimensions differ");
    }
}

}  // namespace

BackgroundCurvature background_curvature(const Background& bg, double r) {
    if (!bg.contains(r)) {
        throw DomainError(condition::kRange, "r=" + std::to_string(r) + " is outside the background domain");
    }
    const int n = bg.n;
    const double k = bg.curvature;
    BackgroundCurvature out;
    out.ricci.components = Eigen::MatrixXd::Identity(n, n) * ((n - 1) * k);
    out.ricci.kind = TensorKind::ricci;
    out.scalar = n * (n - 1) * k;
    return out;
}

CurvatureTensor einstein_tensor(const CurvatureTensor& ricci, double scalar) {
    const int n = ricci.n();
    CurvatureTensor g;
    g.components = ricci.components - 0.5 * scalar * Eigen::MatrixXd::Identity(n, n);
    g.kind = TensorKind::einstein;
    return g;
}

CurvatureTensor schouten_tau(const CurvatureTensor& ricci, double scalar, double tau) {
    const int n = ricci.n();
    require_n_at_least_3(n);
    CurvatureTensor s;
    s.components = (ricci.components - tau * scalar / (2.0 * (n - 1)) * Eigen::MatrixXd::Identity(n, n)) / (n - 2.0);
    s.kind = TensorKind::schouten;
    s.tau = tau;
    return s;
}

ConformalFactorSample ConformalFactorSample::constant(int n, double u) {
    ConformalFactorSample cf;
    cf.u = u;
    cf.grad = Eigen::VectorXd::Zero(n);
    cf.hess = Eigen::MatrixXd::Zero(n, n);
    cf.laplacian = 0.0;
    return cf;
}

ConformalFactorSample ConformalFactorSample::radial(int n, double u, double up, double upp, double warp) {
    ConformalFactorSample cf = constant(n, u);
    cf.grad(0) = up;
    cf.hess.diagonal().setConstant(up * warp);
    cf.hess(0, 0) = upp;
    cf.laplacian = cf.hess.trace();
    return cf;
}

ConformalFactorSample ConformalFactorSample::from_function(const std::function<double(const Eigen::VectorXd&)>& fn,
                                                           const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
    ConformalFactorSample cf = constant(n, fn(x));
    Eigen::VectorXd h(n);
    for (int i = 0; i < n; ++i) h(i) = base_step * std::max(1.0, std::abs(x(i)));
    auto at = [&](int i, double si, int j, double sj) {
        Eigen::VectorXd y = x;
        y(i) += si * h(i);
        if (j >= 0) y(j) += sj * h(j);
        return fn(y);
    };
    for (int i = 0; i < n; ++i) {
        cf.grad(i) = (at(i, 1, -1, 0) - at(i, -1, -1, 0)) / (2.0 * h(i));
        cf.hess(i, i) = (at(i, 1, -1, 0) - 2.0 * cf.u + at(i, -1, -1, 0)) / (h(i) * h(i));
        for (int j = 0; j < i; ++j) {
            const double v = (at(i, 1, j, 1) - at(i, 1, j, -1) - at(i, -1, j, 1) + at(i, -1, j, -1)) / (4.0 * h(i) * h(j));
            cf.hess(i, j) = v;
            cf.hess(j, i) = v;
        }
    }
    cf.laplacian = cf.hess.trace();
    return cf;
}

CurvatureTensor conformal_einstein(const CurvatureTensor& einstein, const ConformalFactorSample& cf) {
    require_same_size(einstein, cf);
    const int n = einstein.n();
    require_n_at_least_3(n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const double grad_sq = cf.grad.squaredNorm();
    CurvatureTensor out;
    out.components = einstein.components / (n - 2.0) + cf.laplacian * id - cf.hess + 0.5 * (n - 3.0) * grad_sq * id +
                     cf.grad * cf.grad.transpose();
    out.kind = TensorKind::conformal_einstein;
    return out;
}

CurvatureTensor conformal_schouten_tau(const CurvatureTensor& schouten, const ConformalFactorSample& cf, double tau) {
    require_same_size(schouten, cf);
    const int n = schouten.n();
    require_n_at_least_3(n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const double grad_sq = cf.grad.squaredNorm();
    CurvatureTensor out;
    out.components = schouten.components + (tau - 1.0) / (n - 2.0) * cf.laplacian * id - cf.hess +
                     0.5 * (tau - 2.0) * grad_sq * id + cf.grad * cf.grad.transpose();
    out.kind = TensorKind::conformal_schouten;
    out.tau = tau;
    return out;
}

symfun::EigenVector eigenvalues_wrt(const CurvatureTensor& tensor, double u) {
    if (tensor.asymmetry() > 1e-10) {
        throw DomainError(condition::kRange, "tensor is not symmetric (asymmetry " + std::to_string(tensor.asymmetry()) + ")");
    }
    const Eigen::MatrixXd sym = 0.5 * (tensor.components + tensor.components.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const double scale = std::exp(-2.0 * u);
    std::vector<double> values(static_cast<std::size_t>(sym.rows()));
    for (Eigen::Index i = 0; i < sym.rows(); ++i) values[static_cast<std::size_t>(i)] = scale * solver.eigenvalues()(i);
    return symfun::EigenVector(std::move(values));
}

SectionalReport sectional_check_3d(const Background& bg, const ConformalFactorSample& cf, double r) {
    if (bg.n != 3 || cf.n() != 3) throw DomainError(condition::kDimension, "sectional check is three-dimensional");
    if (cf.grad.cwiseAbs().maxCoeff() != 0.0 || cf.hess.cwiseAbs().maxCoeff() != 0.0) {
        throw DomainError(condition::kRange, "sectional check supports constant conformal factors only");
    }
    const auto curv = background_curvature(bg, r);
    const auto g = einstein_tensor(curv.ricci, curv.scalar);
    // e^{2u} g with constant u: G is unchanged, unit normals scale by e^{-u},
    // sectional curvatures by e^{-2u}.
    const double scale = std::exp(-2.0 * cf.u);
    SectionalReport rep;
    for (int axis = 0; axis < 3; ++axis) {
        const double lhs = scale * g.components(axis, axis);
        const double rhs = -scale * bg.curvature;
        rep.einstein_normal.push_back(lhs);
        rep.minus_sectional.push_back(rhs);
        rep.max_error = std::max(rep.max_error, std::abs(lhs - rhs));
    }
    rep.pass = rep.max_error <= 1e-10;
    return rep;
}

}  // namespace confcurv::geom
