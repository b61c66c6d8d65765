#include "confcurv/symfun/sigma.hpp"

#include <algorithm>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::symfun {

EigenVector::EigenVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) {
        throw DomainError(condition::kDimension, "EigenVector needs n >= 2 entries");
    }
    std::stable_sort(entries_.begin(), entries_.end());
}

EigenVector::EigenVector(std::initializer_list<double> entries)
    : EigenVector(std::vector<double>(entries)) {}

EigenVector EigenVector::constant(std::size_t n, double value) {
    return EigenVector(std::vector<double>(n, value));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

std::vector<double> elementary_sigmas(std::span<const double> lambda) {
    const std::size_t n = lambda.size();
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
    }
    return e;
}

double elementary_sigma(std::span<const double> lambda, int j) {
    const int n = static_cast<int>(lambda.size());
    if (j < 0 || j > n) {
        throw DomainError(condition::kRange, "sigma index j=" + std::to_string(j) +
                                                 " outside [0, " + std::to_string(n) + "]");
    }
    return elementary_sigmas(lambda)[static_cast<std::size_t>(j)];
}

std::vector<double> elementary_sigmas_excluding(std::span<const double> lambda, std::size_t skip) {
    const std::size_t n = lambda.size();
    std::vector<double> e(n, 0.0);
    e[0] = 1.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == skip) continue;
        ++used;
        for (std::size_t j = used; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
    }
    return e;
}

}  // namespace confcurv::symfun
