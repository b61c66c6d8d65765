#pragma once

#include <span>
#include <vector>

#include "confcurv/symfun/family.hpp"

namespace confcurv::symfun {

/// mu_i = sum_j lambda_j - rho * lambda_i, i.e. mu = lambda Q with Q = J - rho I.
[[nodiscard]] std::vector<double> rho_forward(std::span<const double> lambda, double rho);

/// Inverse map lambda_i = (sum_j mu_j / (n - rho) - mu_i) / rho.
/// Throws DomainError (rho-singular) for rho in {0, n}.
[[nodiscard]] std::vector<double> rho_transform(std::span<const double> mu, double rho);

/// Dense Q, row-major n x n.
[[nodiscard]] std::vector<double> assemble_q(int n, double rho);

/// det Q by LU factorization of the assembled matrix.
[[nodiscard]] double q_determinant(int n, double rho);

/// (-1)^{n-1} rho^{n-1} (n - rho).
[[nodiscard]] double q_determinant_closed_form(int n, double rho);

/// Lower bound on each share (d f~/d lambda_i) / sum_j (d f~/d lambda_j) of the
/// transformed operator f~(lambda) = f(mu(lambda)):
///   1/(n - rho)                                  for rho < 0,
///   (1 - rho (1 - kappa vartheta)) / (n - rho)   for 0 < rho < 1/(1 - kappa vartheta).
/// Throws DomainError (rho-range) otherwise, including rho = 0.
[[nodiscard]] double transformed_ellipticity_bound(double rho, int kappa, double vartheta, int n);

/// Gradient of f~ at lambda: d f~/d lambda_j = sum_i f_i(mu) - rho f_j(mu).
/// Throws AdmissibilityError when mu is outside the family's cone.
[[nodiscard]] std::vector<double> transformed_gradient(const OperatorFamily& fam, std::span<const double> lambda,
                                                       double rho);

}  // namespace confcurv::symfun
