#include "confcurv/barriers/profile.hpp"

#include <cmath>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::barriers {

namespace {

void check_base(int n, double delta) {
    if (n < 3) throw DomainError(condition::kDimension, "barrier profiles need n >= 3");
    if (!(delta > 0.0)) throw DomainError(condition::kProfileParams, "delta must be > 0");
}

void check_subsolution(double k, double delta, double eps, double psi_sup) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError(condition::kProfileParams, "eps must lie in (0, 1)");
    if (!(psi_sup > 0.0)) throw DomainError(condition::kProfileParams, "psi_sup must be > 0");
    if (!(k >= 1.0 / delta)) {
        throw DomainError(condition::kProfileParams,
                          "k=" + std::to_string(k) + " violates k >= 1/delta = " + std::to_string(1.0 / delta));
    }
}

}  // namespace

std::string profile_name(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::lower_hk: return "lower_hk";
        case ProfileKind::upper_hbar: return "upper_hbar";
        case ProfileKind::subsolution_keps: return "subsolution_keps";
        case ProfileKind::subsolution_keps_tau: return "subsolution_keps_tau";
    }
    return "unknown";
}

BarrierProfile BarrierProfile::lower_hk(int n, double k, double delta) {
    check_base(n, delta);
    if (!(k >= 1.0) || std::isinf(k)) throw DomainError(condition::kProfileParams, "lower_hk needs finite k >= 1");
    BarrierProfile p;
    p.kind = ProfileKind::lower_hk;
    p.n = n;
    p.k = k;
    p.delta = delta;
    return p;
}

BarrierProfile BarrierProfile::upper_hbar(int n, double delta) {
    check_base(n, delta);
    BarrierProfile p;
    p.kind = ProfileKind::upper_hbar;
    p.n = n;
    p.delta = delta;
    return p;
}

BarrierProfile BarrierProfile::subsolution(int n, double k, double delta, double eps, double psi_sup) {
    check_base(n, delta);
    check_subsolution(k, delta, eps, psi_sup);
    BarrierProfile p;
    p.kind = ProfileKind::subsolution_keps;
    p.n = n;
    p.k = k;
    p.delta = delta;
    p.eps = eps;
    p.psi_sup = psi_sup;
    return p;
}

BarrierProfile BarrierProfile::subsolution_tau(int n, double k, double delta, double eps, double psi_sup, double tau) {
    check_base(n, delta);
    if (!(n * tau + 2.0 - 2.0 * n > 0.0)) {
        throw DomainError(condition::kTauPositivity,
                          "tau=" + std::to_string(tau) + " violates n*tau + 2 - 2n > 0 (value " +
                              std::to_string(n * tau + 2.0 - 2.0 * n) + ")");
    }
    if (!(tau >= 2.0)) {
        throw DomainError(condition::kTauAtLeastTwo, "tau=" + std::to_string(tau) + " violates tau >= 2");
    }
    check_subsolution(k, delta, eps, psi_sup);
    BarrierProfile p = subsolution(n, k, delta, eps, psi_sup);
    p.kind = ProfileKind::subsolution_keps_tau;
    p.tau = tau;
    return p;
}

double BarrierProfile::blowup_numerator() const noexcept {
    if (kind == ProfileKind::subsolution_keps_tau) return n * tau + 2.0 - 2.0 * n;
    return (n - 1.0) * (n - 2.0);
}

double BarrierProfile::asymptotic_constant() const {
    if (!is_subsolution()) throw DomainError(condition::kProfileParams, "only subsolution profiles carry the constant");
    return 0.5 * std::log((1.0 - eps) * (1.0 - eps) * blowup_numerator() / (2.0 * (psi_sup + eps)));
}

bool BarrierProfile::in_domain(double d) const noexcept {
    if (!(d >= 0.0)) return false;
    if (is_subsolution()) return d < delta && !(std::isinf(k) && d == 0.0);
    return d <= delta;
}

ProfileValue eval_profile(const BarrierProfile& p, double d) {
    if (!p.in_domain(d)) {
        throw DomainError(condition::kProfileDomain,
                          "d=" + std::to_string(d) + " outside the " + profile_name(p.kind) + " domain");
    }
    ProfileValue v;
    switch (p.kind) {
        case ProfileKind::lower_hk: {
            const double q = p.k * d + p.delta * p.delta;
            v.h = std::log(p.k * p.delta * p.delta / q);
            v.hp = -p.k / q;
            v.hpp = p.k * p.k / (q * q);
            break;
        }
        case ProfileKind::upper_hbar: {
            const double q = p.delta * p.delta + d;
            v.h = std::log1p(d / (p.delta * p.delta)) / (p.n - 2.0);
            v.hp = 1.0 / ((p.n - 2.0) * q);
            v.hpp = -1.0 / ((p.n - 2.0) * q * q);
            break;
        }
        case ProfileKind::subsolution_keps:
        case ProfileKind::subsolution_keps_tau: {
            // k/(kd+1) = 1/(d + 1/k), which also covers k = +inf.
            const double s = d + 1.0 / p.k;
            const double e = d + p.delta;
            v.h = -std::log(s) + p.asymptotic_constant() + 1.0 / e - 1.0 / p.delta;
            v.hp = -1.0 / s - 1.0 / (e * e);
            v.hpp = 1.0 / (s * s) + 2.0 / (e * e * e);
            break;
        }
    }
    return v;
}

}  // namespace confcurv::barriers
