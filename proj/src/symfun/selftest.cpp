#include "confcurv/symfun/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "confcurv/symfun/sampling.hpp"

namespace confcurv::symfun {

std::array<bool, 3> verify_lemma21(const OperatorFamily& fam, std::span<const double> lambda,
                                   std::span<const double> mu) {
    const auto at_lambda = f_evaluate(fam, lambda);
    (void)f_value(fam, mu);  // membership check for mu
    double dir = 0.0;
    double euler = 0.0;
    std::vector<double> sum(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        dir += at_lambda.grad[i] * mu[i];
        euler += at_lambda.grad[i] * lambda[i];
        sum[i] = lambda[i] + mu[i];
    }
    return {dir > 0.0, f_value(fam, sum) > at_lambda.value, euler > 0.0};
}

StructuralReport structural_selftest(const OperatorFamily& fam, long long sample_budget, std::uint64_t seed) {
    StructuralReport rep;
    if (sample_budget <= 0) return rep;
    const auto n = static_cast<std::size_t>(fam.n);
    const auto count = static_cast<std::size_t>(sample_budget);
    const auto pts = sample_cone(fam.natural_cone(), 2 * count, seed);
    const double dn = static_cast<double>(fam.n);
    rep.samples = sample_budget;

    for (std::size_t s = 0; s < count; ++s) {
        const std::span<const double> a(pts.data() + 2 * s * n, n);
        const std::span<const double> b(pts.data() + (2 * s + 1) * n, n);
        const auto ea = f_evaluate(fam, a);
        const double fb = f_value(fam, b);

        std::vector<double> mid(n);
        for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        const double gap = f_value(fam, mid) - 0.5 * (ea.value + fb);
        // Tolerances are relative to the input magnitude: near the cone boundary
        // f is many orders smaller than the entries it is computed from.
        const double size_a = std::max(std::abs(a.front()), std::abs(a.back()));
        const double size_b = std::max(std::abs(b.front()), std::abs(b.back()));
        const double scale = std::max({1.0, size_a, size_b});
        if (gap < -1e-12 * scale) ++rep.concavity_failures;
        rep.worst_concavity_gap = s == 0 ? gap / scale : std::min(rep.worst_concavity_gap, gap / scale);

        // First-order response of f to relative perturbations of the entries;
        // equals f away from the boundary (Euler) and grows as sigma_k -> 0.
        double sensitivity = std::abs(ea.value);
        {
            double s_abs = 0.0;
            for (std::size_t i = 0; i < n; ++i) s_abs += ea.grad[i] * std::abs(a[i]);
            sensitivity = std::max(sensitivity, s_abs);
        }
        for (double t : {0.5, 2.0, 10.0}) {
            std::vector<double> scaled(a.begin(), a.end());
            for (double& x : scaled) x *= t;
            if (std::abs(f_value(fam, scaled) - t * ea.value) > 1e-12 * t * sensitivity) {
                ++rep.homogeneity_failures;
                break;
            }
        }

        const double trace = std::accumulate(a.begin(), a.end(), 0.0);
        if (trace < dn * ea.value - 1e-12 * std::max(1.0, std::abs(trace))) ++rep.trace_failures;

        const double gsum = std::accumulate(ea.grad.begin(), ea.grad.end(), 0.0);
        for (double r : {1.0, 10.0}) {
            if (!(gsum > (r - ea.value) / r)) {
                ++rep.gradient_sum_failures;
                break;
            }
        }

        // Rescale b to the trace of a so (b) is not lost to rounding when the
        // two samples differ by many orders of magnitude.
        std::vector<double> bs(b.begin(), b.end());
        const double ratio = trace / std::accumulate(b.begin(), b.end(), 0.0);
        for (double& x : bs) x *= ratio;
        const auto l21 = verify_lemma21(fam, a, bs);
        if (!(l21[0] && l21[1] && l21[2])) ++rep.lemma21_failures;
    }
    return rep;
}

}  // namespace confcurv::symfun
