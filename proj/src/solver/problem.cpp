#include "confcurv/solver/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "confcurv/error.hpp"
#include "confcurv/symfun/ellipticity.hpp"
#include "confcurv/symfun/rho_transform.hpp"

namespace confcurv::solver {

namespace {

// best_alpha is a grid search; every solve of the same (n, k) shares it.
std::pair<int, double> cone_constants(const symfun::ConeSpec& cone) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::pair<int, double>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_pair(cone.n, cone.k);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const int kappa = symfun::kappa_of_cone(cone);
    const double vartheta = symfun::best_alpha(cone).vartheta;
    return cache[key] = {kappa, vartheta};
}

std::string num(double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

// Conformal coordinate rho(r) and the factor a * q(rho) of the model profile.
struct ModelCoords {
    double rho;
    double factor;
};

ModelCoords model_coords(const geom::Background& bg, double r) {
    const double k = bg.curvature;
    if (k == 0.0) return {r, 2.0};
    const double a = std::sqrt(std::abs(k));
    if (k < 0.0) {
        const double rho = std::tanh(0.5 * a * r);
        return {rho, a * (1.0 - rho * rho)};
    }
    const double rho = std::tan(0.5 * a * r);
    return {rho, a * (1.0 + rho * rho)};
}

}  // namespace

double ProblemSpec::rho() const noexcept {
    if (mode.is_schouten()) return (n() - 2.0) / (mode.tau - 1.0);
    return 1.0;
}

bool ProblemSpec::same_equation(const ProblemSpec& other) const noexcept {
    return bg.kind == other.bg.kind && bg.n == other.bg.n && bg.inner == other.bg.inner &&
           bg.outer == other.bg.outer && bg.curvature == other.bg.curvature && fam.kind == other.fam.kind &&
           fam.n == other.fam.n && fam.k == other.fam.k && fam.l == other.fam.l && mode.kind == other.mode.kind &&
           (!mode.is_schouten() || mode.tau == other.mode.tau);
}

EllipticityData validate(const ProblemSpec& spec) {
    const int n = spec.n();
    if (n < 3) throw DomainError(condition::kDimension, "the conformal equations need n >= 3");
    if (spec.fam.n != n) {
        throw DomainError(condition::kDimension,
                          "family dimension " + std::to_string(spec.fam.n) + " differs from background dimension " +
                              std::to_string(n));
    }
    const symfun::ConeSpec cone = spec.fam.natural_cone();
    const auto [kappa, vartheta] = cone_constants(cone);
    if (!spec.mode.is_schouten() && cone.is_positive_cone()) {
        throw DomainError(condition::kPositiveCone,
                          "the Einstein equation is fully uniformly elliptic only for cones other than the positive "
                          "cone (kappa >= 1); " + spec.fam.name() + " has kappa = 0");
    }
    if (spec.mode.is_schouten()) {
        const double tau = spec.mode.tau;
        const double threshold = 1.0 + (n - 2.0) * (1.0 - kappa * vartheta);
        const double positivity = n * tau + 2.0 - 2.0 * n;
        if (!(tau > threshold)) {
            std::string msg = "tau=" + num(tau) + " violates the ellipticity condition tau > 1 + (n-2)(1 - kappa*vartheta) = " +
                              num(threshold) + " (kappa=" + std::to_string(kappa) + ", vartheta=" + num(vartheta) + ")";
            if (!(positivity > 0.0)) msg += "; it also violates n*tau + 2 - 2n > 0 (value " + num(positivity) + ")";
            throw DomainError(condition::kTauEllipticity, msg);
        }
        if (!(positivity > 0.0)) {
            throw DomainError(condition::kTauPositivity,
                              "tau=" + num(tau) + " violates n*tau + 2 - 2n > 0 (value " + num(positivity) + ")");
        }
    }
    EllipticityData e;
    e.kappa = kappa;
    e.vartheta = vartheta;
    e.rho = spec.rho();
    e.share_bound = symfun::transformed_ellipticity_bound(e.rho, kappa, vartheta, n);
    return e;
}

ModelProfile ModelProfile::complete(const geom::Background& bg, double c, double psi) {
    ModelProfile m;
    m.bg = bg;
    m.log_scale = 0.5 * std::log(c / psi);
    m.pole = model_coords(bg, bg.outer).rho;
    return m;
}

ModelProfile ModelProfile::through(const geom::Background& bg, double c, double psi, double value) {
    ModelProfile m = complete(bg, c, psi);
    const ModelCoords b = model_coords(bg, bg.outer);
    // a q P / (P^2 - rho_b^2) = t  <=>  t P^2 - a q P - t rho_b^2 = 0.
    const double t = std::exp(value - m.log_scale);
    const double aq = b.factor;
    m.pole = (aq + std::sqrt(aq * aq + 4.0 * t * t * b.rho * b.rho)) / (2.0 * t);
    return m;
}

ModelProfile ModelProfile::through_inner(const geom::Background& bg, double c, double psi, double value) {
    ModelProfile m = complete(bg, c, psi);
    m.exterior = true;
    const ModelCoords b = model_coords(bg, bg.inner);
    // a q P / (rho_b^2 - P^2) = t  <=>  t P^2 + a q P - t rho_b^2 = 0.
    const double t = std::exp(value - m.log_scale);
    const double aq = b.factor;
    m.pole = (-aq + std::sqrt(aq * aq + 4.0 * t * t * b.rho * b.rho)) / (2.0 * t);
    return m;
}

double ModelProfile::value(double r) const {
    const ModelCoords x = model_coords(bg, r);
    const double gap = exterior ? x.rho * x.rho - pole * pole : pole * pole - x.rho * x.rho;
    if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
    return log_scale + std::log(x.factor * pole / gap);
}

std::vector<double> initial_guess(const ProblemSpec& spec, const std::vector<double>& nodes) {
    const double c = spec.mode.target_constant(spec.n());
    const ModelProfile m = ModelProfile::through(spec.bg, c, spec.psi(spec.bg.outer), spec.boundary_value);
    std::vector<double> u(nodes.size());
    if (!spec.bg.has_inner_boundary()) {
        for (std::size_t i = 0; i < nodes.size(); ++i) u[i] = m.value(nodes[i]);
        u.back() = spec.boundary_value;
        return u;
    }
    const ModelProfile e = ModelProfile::through_inner(spec.bg, c, spec.psi(spec.bg.inner), spec.inner_value());
    // Soft maximum of the two conformal factors, (e^{8a} + e^{8b})^{1/8}. Small
    // exponents leave the cone at small k (1 for sigma_2, 4 for sigma_3, n = 4).
    constexpr double p = 8.0;
    auto combined = [&](double r) {
        const double a = m.value(r);
        const double b = e.value(r);
        return std::max(a, b) + std::log1p(std::exp(-p * std::abs(a - b))) / p;
    };
    const double lo = spec.inner_value() - combined(spec.bg.inner);
    const double hi = spec.boundary_value - combined(spec.bg.outer);
    const double extent = spec.bg.outer - spec.bg.inner;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double s = (nodes[i] - spec.bg.inner) / extent;
        u[i] = combined(nodes[i]) + (1.0 - s) * lo + s * hi;
    }
    u.back() = spec.boundary_value;
    if (spec.bg.has_inner_boundary()) u.front() = spec.inner_value();
    return u;
}

std::optional<std::vector<double>> supersolution(const ProblemSpec& spec, const std::vector<double>& nodes) {
    if (spec.bg.has_inner_boundary()) return std::nullopt;
    double inf_psi = std::numeric_limits<double>::infinity();
    for (double r : nodes) inf_psi = std::min(inf_psi, spec.psi(r));
    const ModelProfile m = ModelProfile::complete(spec.bg, spec.mode.target_constant(spec.n()), inf_psi);
    std::vector<double> u(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) u[i] = m.value(nodes[i]);
    return u;
}

}  // namespace confcurv::solver
