#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confcurv/symfun/cone.hpp"
#include "confcurv/symfun/family.hpp"

namespace confcurv::symfun {

/// Largest l in [0, n-1] such that (-eps,...,-eps, 1,...,1) with l negative
/// entries lies in the cone for some eps = 2^-j, j = 0..48.
[[nodiscard]] int kappa_of_cone(const ConeSpec& cone);

/// Lower bound on f_i / sum_j f_j for i <= kappa+1 from an admissible alpha:
///   (1/n) * alpha_1 / (sum_{i>kappa} alpha_i - sum_{i=2}^{kappa} alpha_i).
/// `alpha` holds the magnitudes; the tested vector is
/// (-alpha_1, ..., -alpha_kappa, alpha_{kappa+1}, ..., alpha_n). With kappa = 0
/// the bound is 1/n.
[[nodiscard]] double vartheta_analytic(const ConeSpec& cone, std::span<const double> alpha);

struct AlphaChoice {
    std::vector<double> alpha;
    double vartheta = 0.0;
};

/// Maximizes vartheta_analytic over alpha_i in {2^-8, ..., 2^0}.
[[nodiscard]] AlphaChoice best_alpha(const ConeSpec& cone);

struct EllipticityReport {
    int kappa = 0;
    double vartheta_analytic = 0.0;
    double vartheta_empirical = 0.0;
    std::optional<double> sharpness_min_ratio;         // absent when kappa + 2 > n
    std::optional<std::vector<double>> sharpness_witness;
    long long sample_count = 0;
    std::uint64_t seed = 0;

    // Side checks made on the same samples (not part of the JSON record).
    std::vector<double> alpha;
    long long gradient_sign_failures = 0;      // some f_i < 0 or sum f_i <= 0
    long long antimonotone_failures = 0;       // lambda_i <= lambda_j but f_i < f_j
    long long negative_entry_failures = 0;     // lambda_i <= 0 but f_i < vartheta * sum f

    [[nodiscard]] bool partial_uniform_holds(double tol = 1e-12) const {
        return vartheta_empirical >= vartheta_analytic - tol;
    }
    [[nodiscard]] bool all_checks_pass(double tol = 1e-12) const {
        return partial_uniform_holds(tol) && gradient_sign_failures == 0 && antimonotone_failures == 0 &&
               negative_entry_failures == 0;
    }
};

/// Sampled infimum of min_{i <= kappa+1} f_i / sum_j f_j plus the sharpness
/// search along (eps,...,eps, 1,...,1) with kappa+1 small entries.
[[nodiscard]] EllipticityReport vartheta_empirical(const OperatorFamily& fam, const ConeSpec& cone,
                                                   long long sample_budget, std::uint64_t seed);

/// JSON text with fields kappa, vartheta_analytic, vartheta_empirical,
/// sharpness_min_ratio, sample_count, seed (stable key order, fixed precision).
[[nodiscard]] std::string to_json(const EllipticityReport& report);

}  // namespace confcurv::symfun
