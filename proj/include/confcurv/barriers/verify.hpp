#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confcurv/barriers/profile.hpp"
#include "confcurv/geom/profile.hpp"
#include "confcurv/symfun/family.hpp"

namespace confcurv::barriers {

inline constexpr int kCollarGridSize = 200;
inline constexpr double kCollarGridRatio = 0.95;
/// Largest delta any bisection reports; a threshold equal to this means
/// "passes for every tested delta".
inline constexpr double kDeltaCap = 1.0;

/// d_j = delta * 0.95^j, j = 1..200.
[[nodiscard]] std::vector<double> collar_grid(double delta);

/// Slacks are normalized so that rounding noise sits near 1e-16 regardless of
/// how fast the profile blows up at d = 0:
///   lower_hk:    lambda_min(U[h_k] - c g) / c,            c = (n-1) k^2 / (8 (k d + delta^2)^2)
///   upper_hbar:  -tr U[h] / ((n-1)(n-2)/2 h'^2)
///   subsolution: e^{-2h} f(lambda) - psi(d)/(n-2)          (already scale-free)
/// A point passes when its slack is >= -1e-10.
struct BarrierReport {
    std::string profile;
    std::vector<std::pair<std::string, double>> params;
    int grid_size = 0;
    bool pass = false;
    double min_slack = 0.0;
    double worst_d = 0.0;
    std::optional<double> delta_threshold;
    /// Human-readable description of each failed sub-check (empty on pass).
    std::vector<std::string> failures;
};

[[nodiscard]] std::string to_json(const BarrierReport& report);

/// U[h_k] >= (n-1) k^2 / (8 (k d + delta^2)^2) g on the collar grid, plus the
/// largest delta (bisected, capped at kDeltaCap) for which it holds at this k.
[[nodiscard]] BarrierReport verify_lower_barrier(const BarrierProfile& p, const geom::CollarGeometry& geo);

/// tr_g U[hbar] <= 0 on the collar grid, plus the bisected delta threshold.
[[nodiscard]] BarrierReport upper_barrier_check(const BarrierProfile& p, const geom::CollarGeometry& geo);

using PsiProfile = std::function<double(double d)>;

/// The delta-conditions for the subsolution at a given (delta, eps, tau):
///   (1) |grad d|^2 >= 1 - eps
///   (2) 2c/(d+delta)^3 |grad d|^2 g - (d+delta)^{-2} B >= 0
///   (3) eps a k^2/(kd+1)^2 |grad d|^2 g - k/(kd+1) B >= 0 for all k >= 1/delta
///   (4) psi_sup + eps >= sup of psi over the collar
/// with c = (tau-1)/(n-2), a = (n tau + 2 - 2n)/(2(n-2)) and
/// B = c Delta d g - Hess d (tau = n-1 gives the Einstein case).
/// Returns the first violated condition number, or 0.
[[nodiscard]] int first_failed_delta_condition(double delta, double eps, double tau, double psi_sup,
                                               const PsiProfile& psi, const geom::CollarGeometry& geo);

/// Largest delta_eps (bisection, capped at kDeltaCap) with all four conditions.
/// Returns 0 when even tiny delta fails.
[[nodiscard]] double bisect_delta_eps(double eps, double tau, double psi_sup, const PsiProfile& psi,
                                      const geom::CollarGeometry& geo);

/// Parameter regime used for verification: delta = delta_eps / 2,
/// k = max(k_requested, 1/delta). tau = nullopt selects the Einstein profile.
[[nodiscard]] BarrierProfile subsolution_regime(int n, double eps, double psi_sup, double k_requested,
                                                std::optional<double> tau, const PsiProfile& psi,
                                                const geom::CollarGeometry& geo);

/// Checks, on the collar grid, cone membership of lambda(profile tensor) and
/// f(lambda) >= psi/(n-2) e^{2h} (scaled by e^{-2h}), plus the intermediate
/// inequalities: the h-coefficient bound, h'^2 - h'' >= 0, and the matrix bound
/// profile tensor >= (1-eps) a k^2/(kd+1)^2 g. Throws DomainError
/// (profile-params) when one of the delta-conditions fails for p.delta.
[[nodiscard]] BarrierReport verify_subsolution(const BarrierProfile& p, const symfun::OperatorFamily& fam,
                                               const PsiProfile& psi, const geom::CollarGeometry& geo);

/// h(d) + log d for a subsolution profile.
[[nodiscard]] double subsolution_offset(const BarrierProfile& p, double d);

struct OffsetFit {
    double extrapolated = 0.0;  // linear extrapolation of the offset to d = 0
    double rate = 0.0;          // max |offset(d) - C| / d over the sample distances
    double limit = 0.0;         // C
};

/// Offset samples at the given distances (k = +inf), linearly extrapolated to 0.
[[nodiscard]] OffsetFit fit_subsolution_offset(const BarrierProfile& p, const std::vector<double>& ds);

}  // namespace confcurv::barriers
