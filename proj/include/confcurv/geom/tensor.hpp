#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "confcurv/geom/background.hpp"
#include "confcurv/symfun/sigma.hpp"

namespace confcurv::geom {

enum class TensorKind { ricci, einstein, schouten, conformal_einstein, conformal_schouten, profile };

/// Symmetric 2-tensor in a g-orthonormal frame (radial direction first).
struct CurvatureTensor {
    Eigen::MatrixXd components;
    TensorKind kind = TensorKind::ricci;
    std::optional<double> tau;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(components.rows()); }
    [[nodiscard]] double trace() const { return components.trace(); }
    [[nodiscard]] double asymmetry() const { return (components - components.transpose()).cwiseAbs().maxCoeff(); }
};

struct BackgroundCurvature {
    CurvatureTensor ricci;
    double scalar = 0.0;
};

/// Ric and R of a constant-curvature background at radius r.
/// Throws DomainError when r is outside the domain.
[[nodiscard]] BackgroundCurvature background_curvature(const Background& bg, double r);

/// G = Ric - R/2 g.
[[nodiscard]] CurvatureTensor einstein_tensor(const CurvatureTensor& ricci, double scalar);

/// S^tau = (Ric - tau R / (2(n-1)) g) / (n-2). Requires n >= 3.
[[nodiscard]] CurvatureTensor schouten_tau(const CurvatureTensor& ricci, double scalar, double tau);

/// A log conformal factor u with its first and second covariant derivatives at a point.
struct ConformalFactorSample {
    double u = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    double laplacian = 0.0;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(grad.size()); }

    static ConformalFactorSample constant(int n, double u);
    /// Radial u at radius r: grad = u' e_1, hess = u'' e_1 e_1 + u' w (g - e_1 e_1).
    static ConformalFactorSample radial(int n, double u, double up, double upp, double warp);
    /// Flat-space oracle: derivatives of `fn` at x by central differences with
    /// step eps^{1/3} max(1, |x_i|).
    static ConformalFactorSample from_function(const std::function<double(const Eigen::VectorXd&)>& fn,
                                               const Eigen::VectorXd& x);
};

/// (1/(n-2)) G of e^{2u} g, in the g frame:
///   G_g/(n-2) + Delta u g - Hess u + (n-3)/2 |grad u|^2 g + du (x) du.
[[nodiscard]] CurvatureTensor conformal_einstein(const CurvatureTensor& einstein, const ConformalFactorSample& cf);

/// S^tau of e^{2u} g, in the g frame:
///   S^tau_g + (tau-1)/(n-2) Delta u g - Hess u + (tau-2)/2 |grad u|^2 g + du (x) du.
[[nodiscard]] CurvatureTensor conformal_schouten_tau(const CurvatureTensor& schouten, const ConformalFactorSample& cf,
                                                     double tau);

/// Ascending eigenvalues of T in the g frame, times e^{-2u} (eigenvalues with
/// respect to e^{2u} g; u = 0 gives g-eigenvalues). Throws DomainError when T
/// is asymmetric beyond 1e-10.
[[nodiscard]] symfun::EigenVector eigenvalues_wrt(const CurvatureTensor& tensor, double u = 0.0);

struct SectionalReport {
    std::vector<double> einstein_normal;  // G~(n, n) for the three coordinate planes
    std::vector<double> minus_sectional;  // -K~ for the same planes
    double max_error = 0.0;
    bool pass = false;
};

/// In dimension three, G(n, n) = -K(Sigma) for the plane Sigma with unit normal n.
/// Checked on e^{2u} g with constant u over the three coordinate planes.
[[nodiscard]] SectionalReport sectional_check_3d(const Background& bg, const ConformalFactorSample& cf,
                                                 double r = 0.5);

}  // namespace confcurv::geom
