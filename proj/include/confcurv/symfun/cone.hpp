#pragma once

#include <optional>
#include <span>
#include <vector>

namespace confcurv::symfun {

/// Garding cone Gamma_k in R^n, optionally pulled back through the linear map
/// lambda -> mu, mu_i = sum_j lambda_j - rho * lambda_i (the transformed cone).
struct ConeSpec {
    int n = 3;
    int k = 1;
    double tol = 0.0;
    std::optional<double> rho;

    /// Validates 1 <= k <= n, n >= 2, tol >= 0.
    static ConeSpec garding(int n, int k, double tol = 0.0);
    static ConeSpec transformed(int n, int k, double rho, double tol = 0.0);

    [[nodiscard]] bool is_positive_cone() const noexcept { return !rho && k == n; }
};

/// Vector actually tested against Gamma_k: lambda itself, or mu for transformed cones.
[[nodiscard]] std::vector<double> cone_coordinates(std::span<const double> lambda, const ConeSpec& cone);

/// Index j of the first sigma_j (1 <= j <= k) with sigma_j <= tol, or nullopt if inside.
[[nodiscard]] std::optional<int> first_violation(std::span<const double> lambda, const ConeSpec& cone);

[[nodiscard]] bool cone_membership(std::span<const double> lambda, const ConeSpec& cone);

/// Signed, degree-one homogeneous distance proxy:
/// min over j <= k of sign(sigma_j) |sigma_j / C(n,j)|^{1/j}. Positive iff inside;
/// equals 1 at the all-ones vector of Gamma_k.
[[nodiscard]] double cone_slack(std::span<const double> lambda, const ConeSpec& cone);

}  // namespace confcurv::symfun
