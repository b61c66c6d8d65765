#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace confcurv::symfun {

/// Ordered eigenvalue tuple, always stored ascending (lambda_1 <= ... <= lambda_n).
class EigenVector {
public:
    explicit EigenVector(std::vector<double> entries);
    EigenVector(std::initializer_list<double> entries);

    static EigenVector constant(std::size_t n, double value);
    static EigenVector ones(std::size_t n) { return constant(n, 1.0); }

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return entries_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return entries_; }
    [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
    [[nodiscard]] auto end() const noexcept { return entries_.end(); }

    operator std::span<const double>() const noexcept { return entries_; }  // NOLINT(google-explicit-constructor)

    friend bool operator==(const EigenVector&, const EigenVector&) = default;

private:
    std::vector<double> entries_;
};

/// Binomial coefficient C(n, k) as a double (0 when k is out of range).
[[nodiscard]] double binomial(int n, int k);

/// All elementary symmetric polynomials sigma_0..sigma_n of `lambda`,
/// by multiplying out prod_i (1 + lambda_i x).
[[nodiscard]] std::vector<double> elementary_sigmas(std::span<const double> lambda);

/// sigma_j(lambda). Throws DomainError unless 0 <= j <= n.
[[nodiscard]] double elementary_sigma(std::span<const double> lambda, int j);

/// sigma_0..sigma_{n-1} of lambda with entry `skip` removed; this is the
/// gradient table d sigma_{j+1} / d lambda_skip.
[[nodiscard]] std::vector<double> elementary_sigmas_excluding(std::span<const double> lambda,
                                                             std::size_t skip);

}  // namespace confcurv::symfun
