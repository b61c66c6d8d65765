#include "confcurv/symfun/family.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "confcurv/error.hpp"
#include "confcurv/kernels/esf_batch.hpp"
#include "confcurv/symfun/sigma.hpp"

namespace confcurv::symfun {

namespace {

void check_dimension(const OperatorFamily& fam, std::size_t size) {
    if (static_cast<int>(size) != fam.n) {
        throw DomainError(condition::kDimension, "vector has " + std::to_string(size) +
                                                     " entries, family expects n=" + std::to_string(fam.n));
    }
}

// Value from the sigma table; e has at least k+1 entries.
double value_from_sigmas(const OperatorFamily& fam, const double* e, std::size_t stride) {
    const double sk = e[static_cast<std::size_t>(fam.k) * stride];
    if (fam.kind == FamilyKind::sigma_k_root) {
        return std::pow(sk / binomial(fam.n, fam.k), 1.0 / fam.k);
    }
    const double sl = e[static_cast<std::size_t>(fam.l) * stride];
    const double q = (sk / sl) * (binomial(fam.n, fam.l) / binomial(fam.n, fam.k));
    return std::pow(q, 1.0 / (fam.k - fam.l));
}

// d f / d lambda_i given f, sigma_k, sigma_l and the leave-one-out table of lambda_i.
double partial_from_sigmas(const OperatorFamily& fam, double f, double sk, double sl, const double* ex,
                           std::size_t stride) {
    const double dk = ex[static_cast<std::size_t>(fam.k - 1) * stride];
    if (fam.kind == FamilyKind::sigma_k_root) return f * dk / (fam.k * sk);
    const double dl = fam.l == 0 ? 0.0 : ex[static_cast<std::size_t>(fam.l - 1) * stride];
    return f / (fam.k - fam.l) * (dk / sk - dl / sl);
}

void require_inside(const OperatorFamily& fam, const std::vector<double>& e) {
    for (int j = 1; j <= fam.k; ++j) {
        const double s = e[static_cast<std::size_t>(j)];
        if (!(s > 0.0)) {
            throw AdmissibilityError(static_cast<std::size_t>(j), s,
                                     "lambda outside Gamma_" + std::to_string(fam.k) + ": sigma_" +
                                         std::to_string(j) + " = " + std::to_string(s) + " <= 0");
        }
    }
}

}  // namespace

OperatorFamily OperatorFamily::sigma_k_root(int n, int k) {
    (void)ConeSpec::garding(n, k);
    return OperatorFamily{FamilyKind::sigma_k_root, n, k, 0};
}

OperatorFamily OperatorFamily::sigma_quotient(int n, int k, int l) {
    (void)ConeSpec::garding(n, k);
    if (l < 0 || l >= k) {
        throw DomainError(condition::kRange, "quotient index l=" + std::to_string(l) + " must satisfy 0 <= l < k=" +
                                                 std::to_string(k));
    }
    return OperatorFamily{FamilyKind::sigma_quotient, n, k, l};
}

std::string OperatorFamily::name() const {
    if (kind == FamilyKind::sigma_k_root) return "sigma_k_root";
    return "sigma_quotient";
}

double f_value(const OperatorFamily& fam, std::span<const double> lambda) {
    check_dimension(fam, lambda.size());
    const auto e = elementary_sigmas(lambda);
    require_inside(fam, e);
    return value_from_sigmas(fam, e.data(), 1);
}

FamilyEval f_evaluate(const OperatorFamily& fam, std::span<const double> lambda) {
    check_dimension(fam, lambda.size());
    const auto e = elementary_sigmas(lambda);
    require_inside(fam, e);
    FamilyEval out;
    out.value = value_from_sigmas(fam, e.data(), 1);
    out.grad.resize(lambda.size());
    const double sk = e[static_cast<std::size_t>(fam.k)];
    const double sl = e[static_cast<std::size_t>(fam.l)];
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const auto ex = elementary_sigmas_excluding(lambda, i);
        out.grad[i] = partial_from_sigmas(fam, out.value, sk, sl, ex.data(), 1);
    }
    return out;
}

std::vector<double> f_gradient(const OperatorFamily& fam, std::span<const double> lambda) {
    return f_evaluate(fam, lambda).grad;
}

FamilyBatch f_evaluate_batch(const OperatorFamily& fam, std::size_t count, std::span<const double> lambda) {
    const auto n = static_cast<std::size_t>(fam.n);
    if (lambda.size() != n * count) {
        throw DomainError(condition::kDimension, "batch buffer size does not match n * count");
    }
    FamilyBatch out;
    out.count = count;
    out.value.assign(count, std::numeric_limits<double>::quiet_NaN());
    out.grad.assign(n * count, std::numeric_limits<double>::quiet_NaN());
    out.inside.assign(count, 0);
    if (count == 0) return out;

    std::vector<double> sig((n + 1) * count);
    std::vector<double> ex(n * n * count);
    kernels::esf_batch(fam.n, count, lambda, sig);
    kernels::esf_excluding_batch(fam.n, count, lambda, ex);

    for (std::size_t s = 0; s < count; ++s) {
        bool ok = true;
        for (int j = 1; j <= fam.k && ok; ++j) ok = sig[static_cast<std::size_t>(j) * count + s] > 0.0;
        if (!ok) continue;
        out.inside[s] = 1;
        const double f = value_from_sigmas(fam, sig.data() + s, count);
        out.value[s] = f;
        const double sk = sig[static_cast<std::size_t>(fam.k) * count + s];
        const double sl = sig[static_cast<std::size_t>(fam.l) * count + s];
        for (std::size_t i = 0; i < n; ++i) {
            out.grad[i * count + s] = partial_from_sigmas(fam, f, sk, sl, ex.data() + i * n * count + s, count);
        }
    }
    return out;
}

}  // namespace confcurv::symfun
