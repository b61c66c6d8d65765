#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confcurv {

/// Thrown when an argument violates a precondition of the operation.
///
/// `condition()` is a short, stable tag naming the violated condition
/// (for example "tau-ellipticity" or "cone-membership"); `what()` carries
/// the human-readable statement of it.
class DomainError : public std::domain_error {
public:
    DomainError(std::string condition, const std::string& message)
        : std::domain_error(message), condition_(std::move(condition)) {}

    [[nodiscard]] const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

/// A vector left the admissible cone. Carries the offending node (or
/// elementary-function index for pointwise evaluations) and the signed slack.
class AdmissibilityError : public DomainError {
public:
    AdmissibilityError(std::size_t index, double slack, const std::string& message)
        : DomainError("cone-membership", message), index_(index), slack_(slack) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    [[nodiscard]] double slack() const noexcept { return slack_; }

private:
    std::size_t index_;
    double slack_;
};

class NonconvergenceError : public std::runtime_error {
public:
    NonconvergenceError(const std::string& message, int iterations, double residual)
        : std::runtime_error(message), iterations_(iterations), residual_(residual) {}

    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

// Condition tags shared by validation code and the CLI.
namespace condition {
inline constexpr const char* kConeMembership = "cone-membership";
inline constexpr const char* kDimension = "dimension";
inline constexpr const char* kRange = "range";
inline constexpr const char* kTauEllipticity = "tau-ellipticity";   // tau > 1 + (n-2)(1 - kappa*vartheta)
inline constexpr const char* kTauPositivity = "tau-positivity";     // n*tau + 2 - 2n > 0
inline constexpr const char* kTauAtLeastTwo = "tau-at-least-two";   // tau >= 2 for the asymptotic path
inline constexpr const char* kRhoRange = "rho-range";               // rho < 1/(1 - kappa*vartheta), rho != 0
inline constexpr const char* kRhoSingular = "rho-singular";         // det Q = 0 at rho in {0, n}
inline constexpr const char* kDenominator = "alpha-denominator";
inline constexpr const char* kAlphaOrdering = "alpha-ordering";
inline constexpr const char* kProfileDomain = "profile-domain";
inline constexpr const char* kProfileParams = "profile-parameters";
inline constexpr const char* kPositiveCone = "positive-cone";       // Gamma != Gamma_n required
}  // namespace condition

}  // namespace confcurv
