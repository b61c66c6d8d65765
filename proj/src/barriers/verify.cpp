#include "confcurv/barriers/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confcurv/error.hpp"
#include "confcurv/geom/tensor.hpp"
#include "json.hpp"

namespace confcurv::barriers {

namespace {

constexpr double kSlackTol = -1e-10;
constexpr int kBisectionSteps = 60;

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Eigen::MatrixXd identity(int n) { return Eigen::MatrixXd::Identity(n, n); }

// Largest delta in (0, kDeltaCap] with ok(delta), assuming ok is monotone
// (true below the threshold). 0 when ok fails at the smallest probe.
template <class Pred>
double bisect_threshold(Pred ok) {
    if (ok(kDeltaCap)) return kDeltaCap;
    double lo = 1e-12;
    if (!ok(lo)) return 0.0;
    double hi = kDeltaCap;
    for (int it = 0; it < kBisectionSteps; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

struct Scan {
    double min_slack = std::numeric_limits<double>::infinity();
    double worst_d = 0.0;

    void add(double slack, double d) {
        if (slack < min_slack) {
            min_slack = slack;
            worst_d = d;
        }
    }
    [[nodiscard]] bool pass() const { return min_slack >= kSlackTol; }
};

Scan scan_lower(const BarrierProfile& p, const geom::CollarGeometry& geo) {
    Scan s;
    for (double d : collar_grid(p.delta)) {
        const ProfileValue v = eval_profile(p, d);
        const geom::DistancePoint dp = geo.at(d);
        const geom::CurvatureTensor u =
            geom::U_of_profile(v.hp, v.hpp, dp.grad_sq(), dp.shape_term(), dp.conormal());
        const double q = p.k * d + p.delta * p.delta;
        const double c = (p.n - 1.0) * p.k * p.k / (8.0 * q * q);
        s.add(min_eigenvalue(u.components - c * identity(p.n)) / c, d);
    }
    return s;
}

Scan scan_upper(const BarrierProfile& p, const geom::CollarGeometry& geo) {
    Scan s;
    for (double d : collar_grid(p.delta)) {
        const ProfileValue v = eval_profile(p, d);
        const geom::DistancePoint dp = geo.at(d);
        const double tr = geom::U_of_profile(v.hp, v.hpp, dp.grad_sq(), dp.shape_term(), dp.conormal()).trace();
        s.add(-tr / ((p.n - 1.0) * (p.n - 2.0) / 2.0 * v.hp * v.hp), d);
    }
    return s;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void fail_at(BarrierReport& r, const std::string& what, double d, double slack) {
    r.failures.push_back(what + " fails at d=" + fmt(d) + " (slack " + fmt(slack) + ")");
}

std::vector<std::pair<std::string, double>> params_of(const BarrierProfile& p) {
    std::vector<std::pair<std::string, double>> out{{"n", p.n}, {"delta", p.delta}};
    if (p.kind != ProfileKind::upper_hbar) out.emplace_back("k", p.k);
    if (p.is_subsolution()) {
        out.emplace_back("eps", p.eps);
        out.emplace_back("psi_sup", p.psi_sup);
    }
    if (p.kind == ProfileKind::subsolution_keps_tau) out.emplace_back("tau", p.tau);
    return out;
}

BarrierReport make_report(const BarrierProfile& p, const Scan& s) {
    BarrierReport r;
    r.profile = profile_name(p.kind);
    r.params = params_of(p);
    r.grid_size = kCollarGridSize;
    r.pass = s.pass();
    r.min_slack = s.min_slack;
    r.worst_d = s.worst_d;
    return r;
}

}  // namespace

std::vector<double> collar_grid(double delta) {
    std::vector<double> d(kCollarGridSize);
    double x = delta;
    for (auto& v : d) {
        x *= kCollarGridRatio;
        v = x;
    }
    return d;
}

std::string to_json(const BarrierReport& report) {
    nlohmann::ordered_json j;
    j["profile"] = report.profile;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.params) params[key] = value;
    j["params"] = params;
    j["grid_size"] = report.grid_size;
    j["pass"] = report.pass;
    j["min_slack"] = report.min_slack;
    j["worst_d"] = report.worst_d;
    if (report.delta_threshold) {
        j["delta_threshold"] = *report.delta_threshold;
    } else {
        j["delta_threshold"] = nullptr;
    }
    return j.dump(2) + "\n";
}

BarrierReport verify_lower_barrier(const BarrierProfile& p, const geom::CollarGeometry& geo) {
    if (p.kind != ProfileKind::lower_hk) throw DomainError(condition::kProfileParams, "expected a lower_hk profile");
    const Scan s = scan_lower(p, geo);
    BarrierReport r = make_report(p, s);
    if (!r.pass) fail_at(r, "U[h_k] lower bound", s.worst_d, s.min_slack);
    r.delta_threshold = bisect_threshold([&](double delta) {
        return scan_lower(BarrierProfile::lower_hk(p.n, p.k, delta), geo).pass();
    });
    return r;
}

BarrierReport upper_barrier_check(const BarrierProfile& p, const geom::CollarGeometry& geo) {
    if (p.kind != ProfileKind::upper_hbar) throw DomainError(condition::kProfileParams, "expected an upper_hbar profile");
    const Scan s = scan_upper(p, geo);
    BarrierReport r = make_report(p, s);
    if (!r.pass) fail_at(r, "trace bound", s.worst_d, s.min_slack);
    r.delta_threshold =
        bisect_threshold([&](double delta) { return scan_upper(BarrierProfile::upper_hbar(p.n, delta), geo).pass(); });
    return r;
}

int first_failed_delta_condition(double delta, double eps, double tau, double psi_sup, const PsiProfile& psi,
                                 const geom::CollarGeometry& geo) {
    const int n = geo.n;
    const double c = (tau - 1.0) / (n - 2.0);
    const double a = (n * tau + 2.0 - 2.0 * n) / (2.0 * (n - 2.0));
    const Eigen::MatrixXd id = identity(n);
    std::vector<double> ds = collar_grid(delta);
    ds.push_back(0.0);
    int worst = 0;
    for (double d : ds) {
        const geom::DistancePoint dp = geo.at(d);
        const double g2 = dp.grad_sq();
        const Eigen::MatrixXd b = c * dp.laplacian() * id - dp.hess;
        const double e = d + delta;
        // Worst case of (3) over k >= 1/delta is k = 1/delta, where k/(kd+1) = 1/e.
        const double kk = 1.0 / e;
        const double scale2 = 2.0 * c / (e * e * e);
        const double scale3 = eps * a * kk * kk;
        int failed = 0;
        if (g2 < 1.0 - eps) {
            failed = 1;
        } else if (min_eigenvalue(scale2 * g2 * id - b / (e * e)) < kSlackTol * scale2) {
            failed = 2;
        } else if (min_eigenvalue(scale3 * g2 * id - kk * b) < kSlackTol * scale3) {
            failed = 3;
        } else if (psi && psi(d) > psi_sup + eps) {
            failed = 4;
        }
        if (failed != 0 && (worst == 0 || failed < worst)) worst = failed;
    }
    return worst;
}

double bisect_delta_eps(double eps, double tau, double psi_sup, const PsiProfile& psi,
                        const geom::CollarGeometry& geo) {
    return bisect_threshold(
        [&](double delta) { return first_failed_delta_condition(delta, eps, tau, psi_sup, psi, geo) == 0; });
}

BarrierProfile subsolution_regime(int n, double eps, double psi_sup, double k_requested, std::optional<double> tau,
                                  const PsiProfile& psi, const geom::CollarGeometry& geo) {
    if (geo.n != n) throw DomainError(condition::kDimension, "collar dimension differs from n");
    if (tau) {
        // Validates tau before any bisection runs.
        (void)BarrierProfile::subsolution_tau(n, 1.0, 1.0, eps, psi_sup, *tau);
    }
    const double t = tau.value_or(n - 1.0);
    const double delta_eps = bisect_delta_eps(eps, t, psi_sup, psi, geo);
    if (!(delta_eps > 0.0)) {
        throw DomainError(condition::kProfileParams, "no delta satisfies the collar conditions for eps=" + fmt(eps));
    }
    const double delta = 0.5 * delta_eps;
    const double k = std::max(k_requested, 1.0 / delta);
    return tau ? BarrierProfile::subsolution_tau(n, k, delta, eps, psi_sup, *tau)
               : BarrierProfile::subsolution(n, k, delta, eps, psi_sup);
}

BarrierReport verify_subsolution(const BarrierProfile& p, const symfun::OperatorFamily& fam, const PsiProfile& psi,
                                 const geom::CollarGeometry& geo) {
    if (!p.is_subsolution()) throw DomainError(condition::kProfileParams, "expected a subsolution profile");
    if (fam.n != p.n || geo.n != p.n) throw DomainError(condition::kDimension, "family, collar and profile disagree on n");
    const double tau = p.curvature_tau();
    if (const int cond = first_failed_delta_condition(p.delta, p.eps, tau, p.psi_sup, psi, geo); cond != 0) {
        throw DomainError(condition::kProfileParams,
                          "delta=" + fmt(p.delta) + " violates collar condition (" + std::to_string(cond) + ")");
    }
    if (std::isinf(p.k)) throw DomainError(condition::kProfileParams, "verification needs a finite k");

    const int n = p.n;
    const double c = (tau - 1.0) / (n - 2.0);
    const double a = (n * tau + 2.0 - 2.0 * n) / (2.0 * (n - 2.0));
    const symfun::ConeSpec cone = fam.natural_cone();

    Scan final_scan;
    Scan coef_scan;
    Scan conormal_scan;
    Scan matrix_scan;
    bool cone_ok = true;
    double cone_fail_d = 0.0;

    std::vector<double> ds{0.0};
    const std::vector<double> grid = collar_grid(p.delta);
    ds.insert(ds.end(), grid.begin(), grid.end());
    for (double d : ds) {
        const ProfileValue v = eval_profile(p, d);
        const geom::DistancePoint dp = geo.at(d);
        const double kd = p.k / (p.k * d + 1.0);
        const double e = d + p.delta;

        const double coef = c * v.hpp + 0.5 * (tau - 2.0) * v.hp * v.hp;
        const double coef_rhs = a * kd * kd + 2.0 * c / (e * e * e);
        coef_scan.add((coef - coef_rhs) / coef_rhs, d);
        conormal_scan.add((v.hp * v.hp - v.hpp) / (v.hp * v.hp), d);

        const geom::CurvatureTensor t = geom::profile_tensor(v.hp, v.hpp, dp, tau);
        const double lower = (1.0 - p.eps) * a * kd * kd;
        matrix_scan.add(min_eigenvalue(t.components - lower * identity(n)) / lower, d);

        const symfun::EigenVector lambda = geom::eigenvalues_wrt(t);
        if (!symfun::cone_membership(lambda, cone)) {
            if (cone_ok) cone_fail_d = d;
            cone_ok = false;
            final_scan.add(-std::numeric_limits<double>::infinity(), d);
            continue;
        }
        const double psi_d = psi ? psi(d) : p.psi_sup;
        final_scan.add(std::exp(-2.0 * v.h) * symfun::f_value(fam, lambda) - psi_d / (n - 2.0), d);
    }

    BarrierReport r = make_report(p, final_scan);
    if (!cone_ok) r.failures.push_back("eigenvalues leave the cone at d=" + fmt(cone_fail_d));
    if (!final_scan.pass()) fail_at(r, "f(lambda) >= psi/(n-2) e^{2h}", final_scan.worst_d, final_scan.min_slack);
    if (!coef_scan.pass()) fail_at(r, "h-coefficient bound", coef_scan.worst_d, coef_scan.min_slack);
    if (!conormal_scan.pass()) fail_at(r, "h'^2 - h'' >= 0", conormal_scan.worst_d, conormal_scan.min_slack);
    if (!matrix_scan.pass()) fail_at(r, "matrix lower bound", matrix_scan.worst_d, matrix_scan.min_slack);
    r.pass = r.failures.empty();
    r.delta_threshold = 2.0 * p.delta;
    return r;
}

double subsolution_offset(const BarrierProfile& p, double d) {
    if (!p.is_subsolution()) throw DomainError(condition::kProfileParams, "expected a subsolution profile");
    return eval_profile(p, d).h + std::log(d);
}

OffsetFit fit_subsolution_offset(const BarrierProfile& p, const std::vector<double>& ds) {
    if (ds.size() < 2) throw DomainError(condition::kProfileParams, "offset fit needs at least two distances");
    BarrierProfile q = p;
    q.k = std::numeric_limits<double>::infinity();
    OffsetFit fit;
    fit.limit = q.asymptotic_constant();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(ds.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(ds.size()));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double off = subsolution_offset(q, ds[i]);
        a(row, 0) = 1.0;
        a(row, 1) = ds[i];
        y(row) = off;
        fit.rate = std::max(fit.rate, std::abs(off - fit.limit) / ds[i]);
    }
    fit.extrapolated = a.colPivHouseholderQr().solve(y)(0);
    return fit;
}

}  // namespace confcurv::barriers
