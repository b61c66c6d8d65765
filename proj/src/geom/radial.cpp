#include "confcurv/geom/radial.hpp"

#include <string>
#include <vector>

#include "confcurv/error.hpp"

namespace confcurv::geom {

double Mode::target_constant(int n) const {
    if (kind == Kind::einstein) return 0.5 * (n - 1.0) * (n - 2.0);
    return 0.5 * (n * tau + 2.0 - 2.0 * n);
}

std::string Mode::name() const { return kind == Kind::einstein ? "einstein" : "schouten"; }

symfun::EigenVector RadialEigen::assemble(int n) const {
    std::vector<double> v(static_cast<std::size_t>(n), tangential);
    v[0] = radial;
    return symfun::EigenVector(std::move(v));
}

double background_eigenvalue(const Background& bg, const Mode& mode) {
    const double n = bg.n;
    const double k = bg.curvature;
    if (mode.kind == Mode::Kind::einstein) return -0.5 * (n - 1.0) * k;
    return -k * (n * mode.tau + 2.0 - 2.0 * n) / (2.0 * (n - 2.0));
}

namespace {

// The eigenvalues depend on u' through u'^2 and through w u' (kept separate so
// the centre limit can substitute w u' -> u''(0)).
RadialEigen radial_core(double up, double upp, double wu, int n, const Mode& mode, double background) {
    const double sq = up * up;
    RadialEigen e;
    if (mode.kind == Mode::Kind::einstein) {
        e.radial = background + (n - 1.0) * (wu + 0.5 * sq);
        e.tangential = background + upp + (n - 2.0) * wu + 0.5 * (n - 3.0) * sq;
        return e;
    }
    const double lap = upp + (n - 1.0) * wu;
    const double shared = background + (mode.tau - 1.0) / (n - 2.0) * lap + 0.5 * (mode.tau - 2.0) * sq;
    e.radial = shared - upp + sq;
    e.tangential = shared - wu;
    return e;
}

// Partials of radial_core in (u', u'', w u').
struct CorePartials {
    RadialEigenPartials direct;  // through u'^2 and u''
    double radial_wu = 0.0;
    double tangential_wu = 0.0;
};

CorePartials core_partials(double up, int n, const Mode& mode) {
    CorePartials p;
    if (mode.kind == Mode::Kind::einstein) {
        p.direct.radial_up = (n - 1.0) * up;
        p.direct.tangential_up = (n - 3.0) * up;
        p.direct.tangential_upp = 1.0;
        p.radial_wu = n - 1.0;
        p.tangential_wu = n - 2.0;
        return p;
    }
    const double c = (mode.tau - 1.0) / (n - 2.0);
    p.direct.radial_up = (mode.tau - 2.0) * up + 2.0 * up;
    p.direct.radial_upp = c - 1.0;
    p.direct.tangential_up = (mode.tau - 2.0) * up;
    p.direct.tangential_upp = c;
    p.radial_wu = c * (n - 1.0);
    p.tangential_wu = c * (n - 1.0) - 1.0;
    return p;
}

}  // namespace

RadialEigen radial_eigen(double up, double upp, double warp, int n, const Mode& mode, double background) {
    return radial_core(up, upp, warp * up, n, mode, background);
}

RadialEigen radial_eigen_center(double upp, int n, const Mode& mode, double background) {
    return radial_core(0.0, upp, upp, n, mode, background);
}

RadialEigenPartials radial_eigen_partials(double up, double warp, int n, const Mode& mode) {
    const CorePartials c = core_partials(up, n, mode);
    RadialEigenPartials p = c.direct;
    p.radial_up += warp * c.radial_wu;
    p.tangential_up += warp * c.tangential_wu;
    return p;
}

RadialEigenPartials radial_eigen_center_partials(int n, const Mode& mode) {
    const CorePartials c = core_partials(0.0, n, mode);
    RadialEigenPartials p;
    p.radial_upp = c.direct.radial_upp + c.radial_wu;
    p.tangential_upp = c.direct.tangential_upp + c.tangential_wu;
    return p;
}

symfun::EigenVector radial_reduction(double up, double upp, double r, int n, const Mode& mode) {
    if (!(r > 0.0)) throw DomainError(condition::kRange, "radial reduction needs r > 0");
    if (n < 3) throw DomainError(condition::kDimension, "radial reduction needs n >= 3");
    return radial_eigen(up, upp, 1.0 / r, n, mode).assemble(n);
}

}  // namespace confcurv::geom
