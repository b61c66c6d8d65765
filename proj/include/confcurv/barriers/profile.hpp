#pragma once

#include <string>

namespace confcurv::barriers {

enum class ProfileKind { lower_hk, upper_hbar, subsolution_keps, subsolution_keps_tau };

[[nodiscard]] std::string profile_name(ProfileKind kind);

/// Radial barrier profile h(d) in the boundary distance d.
///   lower_hk:             log(k delta^2 / (k d + delta^2)),            0 <= d <= delta
///   upper_hbar:           log(1 + d / delta^2) / (n-2),                 0 <= d <= delta
///   subsolution_keps:     log(k / (k d + 1)) + C + 1/(d+delta) - 1/delta, 0 <= d < delta
///   subsolution_keps_tau: same with the tau constant,
/// where C = (1/2) log((1-eps)^2 c / (2 (psi_sup + eps))) with c = (n-1)(n-2) or
/// c = n tau + 2 - 2n. Subsolution profiles accept k = +inf (then d > 0).
struct BarrierProfile {
    ProfileKind kind = ProfileKind::lower_hk;
    int n = 3;
    double k = 1.0;
    double delta = 0.1;
    double eps = 0.1;
    double tau = 2.0;
    double psi_sup = 1.0;

    static BarrierProfile lower_hk(int n, double k, double delta);
    static BarrierProfile upper_hbar(int n, double delta);
    static BarrierProfile subsolution(int n, double k, double delta, double eps, double psi_sup);
    /// Rejects n tau + 2 - 2n <= 0 first, then tau < 2.
    static BarrierProfile subsolution_tau(int n, double k, double delta, double eps, double psi_sup, double tau);

    [[nodiscard]] bool is_subsolution() const noexcept {
        return kind == ProfileKind::subsolution_keps || kind == ProfileKind::subsolution_keps_tau;
    }
    /// tau of the curvature the profile is tested against (n-1 means Einstein).
    [[nodiscard]] double curvature_tau() const noexcept { return kind == ProfileKind::subsolution_keps_tau ? tau : n - 1.0; }
    /// (n-1)(n-2) or n tau + 2 - 2n.
    [[nodiscard]] double blowup_numerator() const noexcept;
    /// C above: the limit of h(d) + log d as d -> 0 when k = +inf.
    [[nodiscard]] double asymptotic_constant() const;
    [[nodiscard]] bool in_domain(double d) const noexcept;
};

struct ProfileValue {
    double h = 0.0;
    double hp = 0.0;
    double hpp = 0.0;
};

/// Closed-form value and derivatives. Throws DomainError (profile-domain)
/// outside the profile's domain.
[[nodiscard]] ProfileValue eval_profile(const BarrierProfile& p, double d);

}  // namespace confcurv::barriers
