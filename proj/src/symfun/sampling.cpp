#include "confcurv/symfun/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "confcurv/error.hpp"

namespace confcurv::symfun {

namespace {

using Rng = std::mt19937_64;

std::vector<double> interior_base(const ConeSpec& cone) {
    const auto n = static_cast<std::size_t>(cone.n);
    std::vector<double> ones(n, 1.0);
    if (cone_membership(ones, cone)) return ones;
    std::vector<double> minus(n, -1.0);
    if (cone_membership(minus, cone)) return minus;
    throw DomainError(condition::kConeMembership, "sampler found neither 1 nor -1 inside the cone");
}

std::vector<double> random_direction(std::size_t n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(n);
    double norm = 0.0;
    while (norm < 1e-8) {
        for (double& x : v) x = normal(rng);
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(n);
        norm = 0.0;
        for (double& x : v) {
            x -= mean;
            norm += x * x;
        }
        norm = std::sqrt(norm);
    }
    for (double& x : v) x /= norm;
    return v;
}

std::vector<double> along(const std::vector<double>& base, const std::vector<double>& v, double t) {
    std::vector<double> p(base.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = base[i] + t * v[i];
    return p;
}

// Last inside point on the ray base + t v; falls back to a far point when the
// ray never leaves the cone.
std::vector<double> boundary_point(const ConeSpec& cone, const std::vector<double>& base, Rng& rng) {
    const auto v = random_direction(base.size(), rng);
    double lo = 0.0;
    double hi = 1.0;
    while (cone_membership(along(base, v, hi), cone)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) return along(base, v, lo);
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cone_membership(along(base, v, mid), cone) ? lo : hi) = mid;
    }
    return along(base, v, lo);
}

std::vector<double> scatter_sample(const ConeSpec& cone, const std::vector<double>& base, Rng& rng) {
    const auto n = base.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double scale = std::pow(10.0, -1.5 + 2.0 * unit(rng));
        const auto v = random_direction(n, rng);
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = base[i] / static_cast<double>(n) + scale * v[i];
        if (cone_membership(p, cone)) return p;
    }
    return base;
}

std::vector<double> ray_sample(const ConeSpec& cone, const std::vector<double>& base, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto b = boundary_point(cone, base, rng);
    const double eps = std::pow(10.0, -10.0 * unit(rng));
    std::vector<double> p(b.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - eps) * b[i] + eps * base[i];
    return cone_membership(p, cone) ? p : base;
}

std::vector<double> anisotropic_sample(const ConeSpec& cone, const std::vector<double>& base, Rng& rng) {
    auto p = ray_sample(cone, base, rng);
    const auto n = p.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(1, n - 1);
    const std::size_t m = pick(rng);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    auto q = p;
    for (std::size_t j = 0; j < m; ++j) q[idx[j]] += std::pow(10.0, 6.0 * unit(rng));
    return cone_membership(q, cone) ? q : p;
}

}  // namespace

std::vector<double> sample_cone(const ConeSpec& cone, std::size_t count, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(cone.n);
    const auto base = interior_base(cone);
    std::vector<double> out(n * count);
    for (std::size_t start = 0; start < count; start += kSampleChunk) {
        const std::uint64_t chunk = start / kSampleChunk;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
        Rng rng(seq);
        const std::size_t stop = std::min(count, start + kSampleChunk);
        for (std::size_t s = start; s < stop; ++s) {
            std::vector<double> p;
            switch (s % 3) {
                case 0: p = scatter_sample(cone, base, rng); break;
                case 1: p = ray_sample(cone, base, rng); break;
                default: p = anisotropic_sample(cone, base, rng); break;
            }
            std::sort(p.begin(), p.end());
            std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(s * n));
        }
    }
    return out;
}

}  // namespace confcurv::symfun
