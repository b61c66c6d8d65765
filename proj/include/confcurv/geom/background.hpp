#pragma once

#include <string>

namespace confcurv::geom {

enum class BackgroundKind { euclidean_ball, euclidean_annulus, hyperbolic_ball, round_sphere_band };

/// A rotationally symmetric background (M, g) described by its radial range.
///
/// For the curved kinds `inner`/`outer` are geodesic radii about the centre
/// (for the sphere band: about the north pole). The metric is
/// dr^2 + sn(r)^2 g_{S^{n-1}} with sn = r, sinh(a r)/a or sin(a r)/a, where
/// K = -a^2 or +a^2 is `curvature`.
struct Background {
    BackgroundKind kind = BackgroundKind::euclidean_ball;
    int n = 3;
    double inner = 0.0;
    double outer = 1.0;
    double curvature = 0.0;  // constant sectional curvature K

    static Background euclidean_ball(int n, double radius = 1.0);
    static Background euclidean_annulus(int n, double inner, double outer);
    static Background hyperbolic_ball(int n, double radius, double curvature = -1.0);
    static Background round_sphere_band(int n, double inner, double outer, double curvature = 1.0);

    [[nodiscard]] bool contains(double r) const noexcept;
    /// Blow-up boundary sits at `outer`, and also at `inner` when inner > 0.
    [[nodiscard]] bool has_inner_boundary() const noexcept { return inner > 0.0; }
    /// Distance to the nearest boundary component.
    [[nodiscard]] double boundary_distance(double r) const;
    /// sn'(r)/sn(r): the tangential eigenvalue of the Hessian of r.
    [[nodiscard]] double warp(double r) const;
    [[nodiscard]] std::string name() const;
};

[[nodiscard]] BackgroundKind parse_background_kind(const std::string& text);

}  // namespace confcurv::geom
