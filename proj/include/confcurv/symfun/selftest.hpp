#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "confcurv/symfun/family.hpp"

namespace confcurv::symfun {

/// For lambda, mu in the cone: (a) sum f_i(lambda) mu_i > 0, (b) f(lambda+mu) > f(lambda),
/// (c) sum f_i(lambda) lambda_i > 0. Throws AdmissibilityError if either is outside.
[[nodiscard]] std::array<bool, 3> verify_lemma21(const OperatorFamily& fam, std::span<const double> lambda,
                                                 std::span<const double> mu);

struct StructuralReport {
    long long samples = 0;
    // Near the cone boundary f is far smaller than the entries it is computed
    // from, so tolerances scale with the entries (scale = max(1, |a|, |b|)) or
    // with the sensitivity S = max(f(a), sum_i f_i(a) |a_i|), which equals f(a)
    // when a has no negative entries.
    long long concavity_failures = 0;    // f((a+b)/2) < (f(a)+f(b))/2 - 1e-12 scale
    long long homogeneity_failures = 0;  // |f(t a) - t f(a)| > 1e-12 t S, t in {0.5, 2, 10}
    long long trace_failures = 0;        // sum a_i < n f(a) - 1e-12
    long long gradient_sum_failures = 0; // sum f_i(a) <= (f(R 1) - f(a)) / R, R in {1, 10}
    long long lemma21_failures = 0;
    double worst_concavity_gap = 0.0;    // min of (f(mid) - average) / scale

    [[nodiscard]] bool pass() const {
        return concavity_failures == 0 && homogeneity_failures == 0 && trace_failures == 0 &&
               gradient_sum_failures == 0 && lemma21_failures == 0;
    }
};

/// Checks concavity, homogeneity, the trace inequality sum lambda_i >= n f and
/// the lower bound on sum f_i over `sample_budget` sampled pairs. Failures are
/// counted, never thrown.
[[nodiscard]] StructuralReport structural_selftest(const OperatorFamily& fam, long long sample_budget,
                                                   std::uint64_t seed = 7);

}  // namespace confcurv::symfun
