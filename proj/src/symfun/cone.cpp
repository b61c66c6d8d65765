#include "confcurv/symfun/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "confcurv/error.hpp"
#include "confcurv/symfun/sigma.hpp"

namespace confcurv::symfun {

ConeSpec ConeSpec::garding(int n, int k, double tol) {
    if (n < 2) throw DomainError(condition::kDimension, "cone dimension n must be >= 2");
    if (k < 1 || k > n) {
        throw DomainError(condition::kRange,
                          "cone index k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    if (!(tol >= 0.0)) throw DomainError(condition::kRange, "cone tolerance must be >= 0");
    return ConeSpec{n, k, tol, std::nullopt};
}

ConeSpec ConeSpec::transformed(int n, int k, double rho, double tol) {
    ConeSpec c = garding(n, k, tol);
    if (rho == 0.0 || rho == static_cast<double>(n)) {
        throw DomainError(condition::kRhoSingular,
                          "rho-transform is singular: det Q = (-1)^(n-1) rho^(n-1) (n - rho) vanishes at rho in {0, n}");
    }
    c.rho = rho;
    return c;
}

std::vector<double> cone_coordinates(std::span<const double> lambda, const ConeSpec& cone) {
    if (static_cast<int>(lambda.size()) != cone.n) {
        throw DomainError(condition::kDimension, "vector has " + std::to_string(lambda.size()) +
                                                     " entries, cone expects n=" + std::to_string(cone.n));
    }
    std::vector<double> v(lambda.begin(), lambda.end());
    if (cone.rho) {
        const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
        for (double& x : v) x = total - *cone.rho * x;
    }
    return v;
}

std::optional<int> first_violation(std::span<const double> lambda, const ConeSpec& cone) {
    const auto e = elementary_sigmas(cone_coordinates(lambda, cone));
    for (int j = 1; j <= cone.k; ++j) {
        if (!(e[static_cast<std::size_t>(j)] > cone.tol)) return j;
    }
    return std::nullopt;
}

bool cone_membership(std::span<const double> lambda, const ConeSpec& cone) {
    return !first_violation(lambda, cone).has_value();
}

double cone_slack(std::span<const double> lambda, const ConeSpec& cone) {
    const auto e = elementary_sigmas(cone_coordinates(lambda, cone));
    double slack = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= cone.k; ++j) {
        const double s = e[static_cast<std::size_t>(j)] / binomial(cone.n, j);
        const double root = std::copysign(std::pow(std::abs(s), 1.0 / j), s);
        slack = std::min(slack, root);
    }
    return slack;
}

}  // namespace confcurv::symfun
