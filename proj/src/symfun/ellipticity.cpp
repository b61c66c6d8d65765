#include "confcurv/symfun/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "confcurv/error.hpp"
#include "json.hpp"
#include "confcurv/symfun/sampling.hpp"

namespace confcurv::symfun {

namespace {

std::vector<double> signed_alpha(std::span<const double> alpha, int kappa) {
    std::vector<double> v(alpha.begin(), alpha.end());
    for (int i = 0; i < kappa; ++i) v[static_cast<std::size_t>(i)] = -v[static_cast<std::size_t>(i)];
    return v;
}

double alpha_ratio(std::span<const double> alpha, int kappa, int n) {
    double denom = 0.0;
    for (int i = kappa; i < n; ++i) denom += alpha[static_cast<std::size_t>(i)];
    for (int i = 1; i < kappa; ++i) denom -= alpha[static_cast<std::size_t>(i)];
    return denom;
}

// Nonincreasing index sequences of length len over [0, levels).
void for_each_multiset(int len, int levels, const auto& visit) {
    std::vector<int> idx(static_cast<std::size_t>(len), levels - 1);
    if (len == 0) {
        visit(idx);
        return;
    }
    while (true) {
        visit(idx);
        int pos = len - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == 0) --pos;
        if (pos < 0) return;
        const int v = idx[static_cast<std::size_t>(pos)] - 1;
        for (int j = pos; j < len; ++j) idx[static_cast<std::size_t>(j)] = v;
    }
}

}  // namespace

int kappa_of_cone(const ConeSpec& cone) {
    const auto n = static_cast<std::size_t>(cone.n);
    for (int l = cone.n - 1; l >= 1; --l) {
        double eps = 1.0;
        for (int j = 0; j <= 48; ++j, eps *= 0.5) {
            std::vector<double> v(n, 1.0);
            for (int i = 0; i < l; ++i) v[static_cast<std::size_t>(i)] = -eps;
            if (cone_membership(v, cone)) return l;
        }
    }
    return 0;
}

double vartheta_analytic(const ConeSpec& cone, std::span<const double> alpha) {
    if (static_cast<int>(alpha.size()) != cone.n) {
        throw DomainError(condition::kDimension, "alpha must have n=" + std::to_string(cone.n) + " entries");
    }
    for (double a : alpha) {
        if (!(a > 0.0)) throw DomainError(condition::kRange, "alpha entries must be positive");
    }
    const int kappa = kappa_of_cone(cone);
    const auto v = signed_alpha(alpha, kappa);
    if (!cone_membership(v, cone)) {
        throw DomainError(condition::kConeMembership,
                          "(-alpha_1, ..., -alpha_kappa, alpha_{kappa+1}, ..., alpha_n) is not in the cone (kappa=" +
                              std::to_string(kappa) + ")");
    }
    const double n = static_cast<double>(cone.n);
    if (kappa == 0) return 1.0 / n;
    for (int i = 1; i < kappa; ++i) {
        if (alpha[static_cast<std::size_t>(i)] > alpha[static_cast<std::size_t>(i - 1)]) {
            throw DomainError(condition::kAlphaOrdering, "alpha_1 >= ... >= alpha_kappa is required");
        }
    }
    const double denom = alpha_ratio(alpha, kappa, cone.n);
    if (!(denom > 0.0)) {
        throw DomainError(condition::kDenominator,
                          "sum_{i>kappa} alpha_i - sum_{i=2}^{kappa} alpha_i must be positive, got " +
                              std::to_string(denom));
    }
    return alpha[0] / (n * denom);
}

AlphaChoice best_alpha(const ConeSpec& cone) {
    constexpr int kLevels = 9;  // 2^-8 .. 2^0
    const int n = cone.n;
    const int kappa = kappa_of_cone(cone);
    AlphaChoice best;
    best.alpha.assign(static_cast<std::size_t>(n), 1.0);
    if (kappa == 0) {
        best.vartheta = vartheta_analytic(cone, best.alpha);
        return best;
    }
    auto level = [](int i) { return std::ldexp(1.0, i - (kLevels - 1)); };
    std::vector<double> alpha(static_cast<std::size_t>(n));
    for_each_multiset(kappa, kLevels, [&](const std::vector<int>& neg) {
        for (int i = 0; i < kappa; ++i) alpha[static_cast<std::size_t>(i)] = level(neg[static_cast<std::size_t>(i)]);
        for_each_multiset(n - kappa, kLevels, [&](const std::vector<int>& pos) {
            for (int i = 0; i < n - kappa; ++i) {
                alpha[static_cast<std::size_t>(kappa + i)] = level(pos[static_cast<std::size_t>(i)]);
            }
            const double denom = alpha_ratio(alpha, kappa, n);
            if (!(denom > 0.0)) return;
            const double value = alpha[0] / (n * denom);
            if (value <= best.vartheta) return;
            if (!cone_membership(signed_alpha(alpha, kappa), cone)) return;
            best.vartheta = value;
            best.alpha = alpha;
        });
    });
    if (best.vartheta <= 0.0) {
        throw DomainError(condition::kConeMembership, "no admissible alpha on the search grid");
    }
    return best;
}

EllipticityReport vartheta_empirical(const OperatorFamily& fam, const ConeSpec& cone, long long sample_budget,
                                     std::uint64_t seed) {
    if (sample_budget <= 0) throw DomainError(condition::kRange, "sample_budget must be positive");
    if (cone.n != fam.n || cone.k != fam.k || cone.rho) {
        throw DomainError(condition::kDimension, "cone does not match the family's natural cone");
    }
    EllipticityReport rep;
    rep.kappa = kappa_of_cone(cone);
    const auto choice = best_alpha(cone);
    rep.alpha = choice.alpha;
    rep.vartheta_analytic = choice.vartheta;
    rep.seed = seed;
    rep.sample_count = sample_budget;

    const auto n = static_cast<std::size_t>(fam.n);
    const auto kp1 = static_cast<std::size_t>(rep.kappa + 1);
    const auto count = static_cast<std::size_t>(sample_budget);
    const auto points = sample_cone(cone, count, seed);

    // Transpose into the kernel layout.
    std::vector<double> soa(n * count);
    for (std::size_t s = 0; s < count; ++s) {
        for (std::size_t i = 0; i < n; ++i) soa[i * count + s] = points[s * n + i];
    }
    const auto batch = f_evaluate_batch(fam, count, soa);

    double inf_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < count; ++s) {
        if (!batch.inside[s]) continue;
        double total = 0.0;
        bool sign_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = batch.grad[i * count + s];
            sign_ok = sign_ok && g >= 0.0;
            total += g;
        }
        if (!sign_ok || !(total > 0.0)) {
            ++rep.gradient_sign_failures;
            continue;
        }
        for (std::size_t i = 0; i < kp1; ++i) inf_ratio = std::min(inf_ratio, batch.grad[i * count + s] / total);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            // Entries are ascending, so f_i >= f_{i+1} up to rounding.
            const double gi = batch.grad[i * count + s];
            const double gj = batch.grad[(i + 1) * count + s];
            if (gi < gj - 1e-12 * total) {
                ++rep.antimonotone_failures;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (points[s * n + i] <= 0.0 && batch.grad[i * count + s] < rep.vartheta_analytic * total - 1e-12 * total) {
                ++rep.negative_entry_failures;
                break;
            }
        }
    }
    rep.vartheta_empirical = inf_ratio;

    if (rep.kappa + 2 <= fam.n) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> witness;
        double eps = 1.0;
        for (int j = 1; j <= 12; ++j) {
            eps *= 0.1;
            std::vector<double> lam(n, 1.0);
            for (std::size_t i = 0; i < kp1; ++i) lam[i] = eps;
            const auto grad = f_gradient(fam, lam);
            double total = 0.0;
            for (double g : grad) total += g;
            const double ratio = grad[kp1] / total;
            if (ratio < best) {
                best = ratio;
                witness = lam;
            }
        }
        rep.sharpness_min_ratio = best;
        rep.sharpness_witness = witness;
    }
    return rep;
}

std::string to_json(const EllipticityReport& report) {
    nlohmann::ordered_json j;
    j["kappa"] = report.kappa;
    j["vartheta_analytic"] = report.vartheta_analytic;
    j["vartheta_empirical"] = report.vartheta_empirical;
    if (report.sharpness_min_ratio) {
        j["sharpness_min_ratio"] = *report.sharpness_min_ratio;
    } else {
        j["sharpness_min_ratio"] = nullptr;
    }
    j["sample_count"] = report.sample_count;
    j["seed"] = report.seed;
    return j.dump(2) + "\n";
}

}  // namespace confcurv::symfun
