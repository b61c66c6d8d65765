#include "confcurv/symfun/rho_transform.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::symfun {

namespace {

void check_rho(int n, double rho) {
    if (rho == 0.0 || rho == static_cast<double>(n)) {
        throw DomainError(condition::kRhoSingular,
                          "rho=" + std::to_string(rho) +
                              " makes Q singular: det Q = (-1)^(n-1) rho^(n-1) (n - rho) vanishes at rho in {0, n}");
    }
}

}  // namespace

std::vector<double> rho_forward(std::span<const double> lambda, double rho) {
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    std::vector<double> mu(lambda.size());
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = total - rho * lambda[i];
    return mu;
}

std::vector<double> rho_transform(std::span<const double> mu, double rho) {
    const int n = static_cast<int>(mu.size());
    check_rho(n, rho);
    const double shift = std::accumulate(mu.begin(), mu.end(), 0.0) / (static_cast<double>(n) - rho);
    std::vector<double> lambda(mu.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = (shift - mu[i]) / rho;
    return lambda;
}

std::vector<double> assemble_q(int n, double rho) {
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> q(un * un, 1.0);
    for (std::size_t i = 0; i < un; ++i) q[i * un + i] -= rho;
    return q;
}

double q_determinant(int n, double rho) {
    const auto q = assemble_q(n, rho);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(q.data(), n, n);
    return m.partialPivLu().determinant();
}

double q_determinant_closed_form(int n, double rho) {
    const double sign = (n - 1) % 2 == 0 ? 1.0 : -1.0;
    return sign * std::pow(rho, n - 1) * (static_cast<double>(n) - rho);
}

double transformed_ellipticity_bound(double rho, int kappa, double vartheta, int n) {
    const double dn = static_cast<double>(n);
    if (rho < 0.0) return 1.0 / (dn - rho);
    const double defect = 1.0 - kappa * vartheta;
    const bool below = defect <= 0.0 || rho < 1.0 / defect;
    if (rho == 0.0 || !below) {
        throw DomainError(condition::kRhoRange, "rho=" + std::to_string(rho) +
                                                    " violates rho < 1/(1 - kappa*vartheta), rho != 0 (kappa=" +
                                                    std::to_string(kappa) + ", vartheta=" + std::to_string(vartheta) +
                                                    ")");
    }
    return (1.0 - rho * defect) / (dn - rho);
}

std::vector<double> transformed_gradient(const OperatorFamily& fam, std::span<const double> lambda, double rho) {
    const auto mu = rho_forward(lambda, rho);
    const auto g = f_gradient(fam, mu);
    const double total = std::accumulate(g.begin(), g.end(), 0.0);
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) out[j] = total - rho * g[j];
    return out;
}

}  // namespace confcurv::symfun
