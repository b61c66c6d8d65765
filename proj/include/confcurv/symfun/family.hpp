#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "confcurv/symfun/cone.hpp"

namespace confcurv::symfun {

enum class FamilyKind { sigma_k_root, sigma_quotient };

/// Normalized curvature operators built from elementary symmetric functions.
///   sigma_k_root:   f = (sigma_k / C(n,k))^{1/k}
///   sigma_quotient: f = (sigma_k / sigma_l * C(n,l) / C(n,k))^{1/(k-l)},  0 <= l < k
/// Both satisfy f(1,...,1) = 1 and are degree-one homogeneous on Gamma_k.
struct OperatorFamily {
    FamilyKind kind = FamilyKind::sigma_k_root;
    int n = 3;
    int k = 1;
    int l = 0;

    static OperatorFamily sigma_k_root(int n, int k);
    static OperatorFamily sigma_quotient(int n, int k, int l);

    [[nodiscard]] ConeSpec natural_cone(double tol = 0.0) const { return ConeSpec::garding(n, k, tol); }
    [[nodiscard]] std::string name() const;
};

/// Throws AdmissibilityError (index = first violated sigma_j) outside Gamma_k.
[[nodiscard]] double f_value(const OperatorFamily& fam, std::span<const double> lambda);

/// (f_1, ..., f_n) in the index order of `lambda`.
[[nodiscard]] std::vector<double> f_gradient(const OperatorFamily& fam, std::span<const double> lambda);

struct FamilyEval {
    double value = 0.0;
    std::vector<double> grad;
};

[[nodiscard]] FamilyEval f_evaluate(const OperatorFamily& fam, std::span<const double> lambda);

/// Batched evaluation on a structure-of-arrays block (lambda[i * count + s]),
/// routed through the SIMD sigma kernels. Points outside Gamma_k are flagged
/// with inside[s] = 0 and NaN value/gradient instead of throwing.
struct FamilyBatch {
    std::size_t count = 0;
    std::vector<double> value;          // count
    std::vector<double> grad;           // n * count, grad[i * count + s]
    std::vector<unsigned char> inside;  // count
};

[[nodiscard]] FamilyBatch f_evaluate_batch(const OperatorFamily& fam, std::size_t count,
                                           std::span<const double> lambda);

}  // namespace confcurv::symfun
