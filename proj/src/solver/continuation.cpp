#include "confcurv/solver/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAsymptoticFraction = 0.2;
constexpr double kMinScaledDistance = 16.0;
constexpr int kMinFitNodes = 8;
constexpr std::size_t kRichardsonLevels = 3;

bool is_interior(const Discretization& disc, std::size_t i, double fraction) {
    const auto& bg = disc.spec().bg;
    return !disc.grid().is_dirichlet(i) &&
           bg.boundary_distance(disc.grid().nodes[i]) >= fraction * (bg.outer - bg.inner);
}

// Model profile through the Dirichlet data, used to carry a converged state to
// the next boundary value.
std::vector<double> model_for(const Discretization& disc, double value) {
    ProblemSpec s = disc.spec();
    s.boundary_value = value;
    s.inner_boundary_value.reset();
    return initial_guess(s, disc.grid().nodes);
}

}  // namespace

std::vector<double> parse_k_list(const std::string& text) {
    const auto bad = [&](const std::string& why) {
        return DomainError(condition::kRange, "k-list '" + text + "' " + why + " (expected start:end:xratio)");
    };
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw bad("is malformed");
    std::string ratio_text = text.substr(c2 + 1);
    if (ratio_text.empty() || ratio_text.front() != 'x') throw bad("needs a ratio of the form x<r>");
    ratio_text.erase(0, 1);
    double start = 0.0;
    double end = 0.0;
    double ratio = 0.0;
    try {
        std::size_t used = 0;
        start = std::stod(text.substr(0, c1), &used);
        if (used != c1) throw bad("has a malformed start");
        const std::string end_text = text.substr(c1 + 1, c2 - c1 - 1);
        end = std::stod(end_text, &used);
        if (used != end_text.size()) throw bad("has a malformed end");
        ratio = std::stod(ratio_text, &used);
        if (used != ratio_text.size()) throw bad("has a malformed ratio");
    } catch (const std::invalid_argument&) {
        throw bad("is not numeric");
    } catch (const std::out_of_range&) {
        throw bad("is out of range");
    }
    if (!(start >= 1.0)) throw bad("needs start >= 1");
    if (!(end >= start)) throw bad("needs end >= start");
    if (!(ratio > 1.0)) throw bad("needs ratio > 1");
    std::vector<double> ks;
    for (double k = start; k <= end * (1.0 + 1e-12); k *= ratio) ks.push_back(k);
    return ks;
}

ContinuationResult continuation(const Discretization& base, const std::vector<double>& k_list,
                                const ContinuationOptions& options) {
    if (k_list.empty()) throw DomainError(condition::kRange, "k-list is empty");
    if (!(k_list.front() >= 1.0)) throw DomainError(condition::kRange, "continuation needs k_0 >= 1");
    for (std::size_t i = 1; i < k_list.size(); ++i) {
        if (!(k_list[i] > k_list[i - 1])) throw DomainError(condition::kRange, "k-list must be strictly ascending");
    }
    const std::size_t m = base.size();
    const auto& nodes = base.grid().nodes;
    const auto super = supersolution(base.spec(), nodes);

    ContinuationResult res;
    if (super) res.below_supersolution = true;
    std::vector<double> prev_model;
    for (std::size_t idx = 0; idx < k_list.size(); ++idx) {
        const double value = std::log(k_list[idx]);
        const Discretization disc = base.with_boundary(value);
        std::vector<double> model = model_for(disc, value);
        std::vector<double> u0 = initial_guess(disc.spec(), nodes);
        if (!res.records.empty()) {
            // Warm start: previous solution moved by the change of the model profile.
            const auto& last = res.records.back().u;
            std::vector<double> warm(m);
            for (std::size_t i = 0; i < m; ++i) warm[i] = last[i] + (model[i] - prev_model[i]);
            warm.back() = value;
            if (!base.grid().centre_node) warm.front() = value;
            try {
                if (disc.evaluate(warm).min_slack >= options.newton.cone_floor) u0 = std::move(warm);
            } catch (const AdmissibilityError&) {
            }
        }
        prev_model = std::move(model);
        try {
            res.records.push_back(newton_solve(disc, std::move(u0), options.newton));
            res.records.back().k = k_list[idx];
        } catch (const std::exception& e) {
            res.failure_index = idx;
            char label[32];
            std::snprintf(label, sizeof label, "k=%g: ", k_list[idx]);
            res.failure_message = label + std::string(e.what());
            break;
        }
        const auto& cur = res.records.back().u;
        if (super) {
            for (std::size_t i = 0; i + 1 < m; ++i) {
                const double v = cur[i] - (*super)[i];
                res.worst_supersolution_violation = std::max(res.worst_supersolution_violation, v);
                if (v > options.monotone_tolerance) res.below_supersolution = false;
            }
        }
        if (res.records.size() >= 2) {
            const auto& older = res.records[res.records.size() - 2].u;
            double change = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double v = older[i] - cur[i];
                res.worst_monotone_violation = std::max(res.worst_monotone_violation, v);
                if (v > options.monotone_tolerance) res.monotone = false;
                if (is_interior(base, i, options.interior_distance)) change = std::max(change, std::abs(v));
            }
            res.interior_change.push_back(change);
        }
    }

    if (res.records.size() >= 2) {
        // Polynomial extrapolation in x = 1/k to x = 0 through the last (up to)
        // three records; u_k is analytic in 1/k for the model solutions.
        const std::size_t levels = std::min<std::size_t>(kRichardsonLevels, res.records.size());
        const std::size_t first = res.records.size() - levels;
        std::vector<double> weight(levels, 1.0);
        for (std::size_t a = 0; a < levels; ++a) {
            const double xa = 1.0 / res.records[first + a].k;
            for (std::size_t b = 0; b < levels; ++b) {
                if (b == a) continue;
                const double xb = 1.0 / res.records[first + b].k;
                weight[a] *= xb / (xb - xa);
            }
        }
        res.u_infinity.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (base.grid().is_dirichlet(i)) {
                res.u_infinity[i] = kInf;
                continue;
            }
            for (std::size_t a = 0; a < levels; ++a) res.u_infinity[i] += weight[a] * res.records[first + a].u[i];
        }
    }
    return res;
}

AsymptoticFit asymptotic_extract(const Discretization& disc, const std::vector<double>& u, double k_cutoff) {
    const ProblemSpec& spec = disc.spec();
    if (spec.mode.is_schouten() && !(spec.mode.tau >= 2.0)) {
        throw DomainError(condition::kTauAtLeastTwo,
                          "boundary asymptotics need tau >= 2, got tau=" + std::to_string(spec.mode.tau));
    }
    const auto& nodes = disc.grid().nodes;
    const std::size_t m = nodes.size();
    if (u.size() != m) throw DomainError(condition::kRange, "state size differs from the grid");
    // Nodes on the outer side of the domain (all of them on balls).
    const std::size_t side = disc.grid().centre_node ? m : m / 2 + 1;
    const auto window = static_cast<std::size_t>(std::ceil(kAsymptoticFraction * static_cast<double>(side)));

    std::vector<double> ds;
    std::vector<double> vs;
    for (std::size_t j = 1; j < side && ds.size() < window; ++j) {
        const std::size_t i = m - 1 - j;
        const double d = spec.bg.outer - nodes[i];
        if (disc.grid().is_dirichlet(i) || !(d > 0.0)) continue;
        if (std::isfinite(k_cutoff) && k_cutoff * d < kMinScaledDistance) continue;
        ds.push_back(d);
        vs.push_back(u[i] + std::log(d));
    }
    if (static_cast<int>(ds.size()) < kMinFitNodes) {
        throw DomainError(condition::kRange, "asymptotic fit has " + std::to_string(ds.size()) +
                                                 " usable near-boundary nodes; at least 8 are required");
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(ds.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(ds.size()));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        a(static_cast<Eigen::Index>(i), 0) = 1.0;
        a(static_cast<Eigen::Index>(i), 1) = ds[i];
        y(static_cast<Eigen::Index>(i)) = vs[i];
    }
    const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
    AsymptoticFit fit;
    fit.limit_estimate = coef(0);
    fit.slope = coef(1);
    fit.fit_residual = std::sqrt((a * coef - y).squaredNorm() / static_cast<double>(ds.size()));
    fit.nodes_used = static_cast<int>(ds.size());
    fit.target = 0.5 * std::log(spec.mode.target_constant(spec.n()) / spec.psi(spec.bg.outer));
    return fit;
}

BandReport uniqueness_band(const Discretization& disc_u, const std::vector<double>& u, const Discretization& disc_w,
                           const std::vector<double>& w, double tol) {
    if (!disc_u.spec().same_equation(disc_w.spec())) {
        throw DomainError(condition::kRange, "uniqueness band needs two solutions of the same equation");
    }
    if (disc_u.grid().nodes != disc_w.grid().nodes || u.size() != w.size() || u.size() != disc_u.size()) {
        throw DomainError(condition::kRange, "uniqueness band needs both solutions on the same grid");
    }
    const ProblemSpec& spec = disc_u.spec();
    double lo = std::log(spec.psi(spec.bg.outer));
    double hi = lo;
    if (spec.bg.has_inner_boundary()) {
        const double inner = std::log(spec.psi(spec.bg.inner));
        lo = std::min(lo, inner);
        hi = std::max(hi, inner);
    }
    BandReport b;
    b.width = 0.5 * (hi - lo);
    b.min_difference = kInf;
    b.max_difference = -kInf;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (disc_u.grid().is_dirichlet(i)) continue;
        const double diff = w[i] - u[i];
        b.min_difference = std::min(b.min_difference, diff);
        b.max_difference = std::max(b.max_difference, diff);
    }
    b.holds = b.min_difference >= -tol && b.max_difference <= b.width + tol;
    return b;
}

}  // namespace confcurv::solver
