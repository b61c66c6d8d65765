#include "confcurv/geom/background.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::geom {

namespace {

void check_common(int n, double inner, double outer) {
    if (n < 3) throw DomainError(condition::kDimension, "background dimension n must be >= 3");
    if (!(inner >= 0.0) || !(outer > inner)) {
        throw DomainError(condition::kRange, "background radii must satisfy 0 <= inner < outer");
    }
}

}  // namespace

Background Background::euclidean_ball(int n, double radius) {
    check_common(n, 0.0, radius);
    return Background{BackgroundKind::euclidean_ball, n, 0.0, radius, 0.0};
}

Background Background::euclidean_annulus(int n, double inner, double outer) {
    check_common(n, inner, outer);
    if (inner == 0.0) throw DomainError(condition::kRange, "annulus needs inner > 0");
    return Background{BackgroundKind::euclidean_annulus, n, inner, outer, 0.0};
}

Background Background::hyperbolic_ball(int n, double radius, double curvature) {
    check_common(n, 0.0, radius);
    if (!(curvature < 0.0)) throw DomainError(condition::kRange, "hyperbolic curvature must be negative");
    return Background{BackgroundKind::hyperbolic_ball, n, 0.0, radius, curvature};
}

Background Background::round_sphere_band(int n, double inner, double outer, double curvature) {
    check_common(n, inner, outer);
    if (!(curvature > 0.0)) throw DomainError(condition::kRange, "sphere curvature must be positive");
    if (outer * std::sqrt(curvature) >= std::numbers::pi) {
        throw DomainError(condition::kRange, "sphere band must stay below the antipodal point");
    }
    return Background{BackgroundKind::round_sphere_band, n, inner, outer, curvature};
}

bool Background::contains(double r) const noexcept { return r >= inner && r <= outer; }

double Background::boundary_distance(double r) const {
    if (!contains(r)) throw DomainError(condition::kRange, "point outside the background domain");
    const double to_outer = outer - r;
    return has_inner_boundary() ? std::min(to_outer, r - inner) : to_outer;
}

double Background::warp(double r) const {
    if (!(r > 0.0)) throw DomainError(condition::kRange, "warp is singular at r = 0");
    if (curvature == 0.0) return 1.0 / r;
    const double a = std::sqrt(std::abs(curvature));
    if (curvature < 0.0) return a / std::tanh(a * r);
    return a / std::tan(a * r);
}

std::string Background::name() const {
    switch (kind) {
        case BackgroundKind::euclidean_ball: return "euclidean_ball";
        case BackgroundKind::euclidean_annulus: return "euclidean_annulus";
        case BackgroundKind::hyperbolic_ball: return "hyperbolic_ball";
        case BackgroundKind::round_sphere_band: return "round_sphere_band";
    }
    return "unknown";
}

BackgroundKind parse_background_kind(const std::string& text) {
    if (text == "euclidean_ball" || text == "ball") return BackgroundKind::euclidean_ball;
    if (text == "euclidean_annulus" || text == "annulus") return BackgroundKind::euclidean_annulus;
    if (text == "hyperbolic_ball") return BackgroundKind::hyperbolic_ball;
    if (text == "round_sphere_band") return BackgroundKind::round_sphere_band;
    throw DomainError(condition::kRange, "unknown background '" + text + "'");
}

}  // namespace confcurv::geom
