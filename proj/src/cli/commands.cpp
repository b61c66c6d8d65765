#include "confcurv/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "confcurv/barriers/verify.hpp"
#include "confcurv/error.hpp"
#include "confcurv/kernels/esf_batch.hpp"
#include "confcurv/solver/io.hpp"
#include "confcurv/symfun/ellipticity.hpp"
#include "confcurv/symfun/rho_transform.hpp"
#include "confcurv/symfun/selftest.hpp"
#include "json.hpp"

namespace confcurv::cli {

using json = nlohmann::ordered_json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

Outcome finish(int code, const json& summary, std::vector<std::filesystem::path> files) {
    return Outcome{code, summary.dump(), std::move(files)};
}

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(condition::kRange, message);
}

// Compact label for file names: 2 -> "2", 2.5 -> "2.5".
std::string k_label(double k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", k);
    return buf;
}

}  // namespace

symfun::OperatorFamily make_family(const FamilyOptions& options) {
    if (!options.k) throw DomainError(condition::kRange, "--k (operator order) is required");
    if (options.family == "sigma_k_root") return symfun::OperatorFamily::sigma_k_root(options.n, *options.k);
    if (options.family == "sigma_quotient") {
        return symfun::OperatorFamily::sigma_quotient(options.n, *options.k, options.l);
    }
    throw DomainError(condition::kRange,
                      "unknown family '" + options.family + "' (expected sigma_k_root or sigma_quotient)");
}

// ---------------------------------------------------------------- cone

Outcome cmd_cone(const ConeConfig& config) {
    const auto fam = make_family(config.family);
    require(config.samples > 0, "--samples must be positive");
    const auto cone = fam.natural_cone();
    const int n = fam.n;

    std::optional<double> bound;
    if (config.fully_uniform) {
        if (symfun::kappa_of_cone(cone) == 0) {
            throw DomainError(condition::kPositiveCone,
                              "fully uniform ellipticity needs Gamma != Gamma_n (kappa >= 1); the positive cone has "
                              "kappa = 0");
        }
        if (config.rho == 0.0 || config.rho == static_cast<double>(n)) {
            throw DomainError(condition::kRhoSingular, "det Q = 0 at rho in {0, n}; got rho = " +
                                                           std::to_string(config.rho));
        }
    }

    const auto report = symfun::vartheta_empirical(fam, cone, config.samples, config.seed);
    if (config.fully_uniform) {
        bound = symfun::transformed_ellipticity_bound(config.rho, report.kappa, report.vartheta_analytic, n);
    }

    json j = json::parse(symfun::to_json(report));
    j["family"] = fam.name();
    j["n"] = n;
    j["k"] = fam.k;
    j["alpha"] = report.alpha;
    j["partial_uniform_holds"] = report.partial_uniform_holds();
    j["gradient_sign_failures"] = report.gradient_sign_failures;
    j["antimonotone_failures"] = report.antimonotone_failures;
    j["negative_entry_failures"] = report.negative_entry_failures;
    if (bound) {
        j["fully_uniform"] = json{{"rho", config.rho}, {"bound", *bound}};
    } else {
        j["fully_uniform"] = nullptr;
    }
    if (report.kappa == 0) {
        j["note"] = "kappa = 0 (positive cone): the fully uniform check does not apply and was skipped";
    } else if (!report.sharpness_min_ratio) {
        j["note"] = "kappa + 2 > n: no sharpness direction exists";
    } else {
        j["note"] = nullptr;
    }
    const bool pass = report.all_checks_pass();
    j["pass"] = pass;

    write_atomic(config.output, j.dump(2) + "\n");
    json summary{{"command", "cone"},      {"pass", pass},
                 {"kappa", report.kappa},  {"vartheta_analytic", report.vartheta_analytic},
                 {"vartheta_empirical", report.vartheta_empirical}, {"output", config.output.string()}};
    if (bound) summary["fully_uniform_bound"] = *bound;
    return finish(pass ? kExitPass : kExitFail, summary, {config.output});
}

// ---------------------------------------------------------------- barrier

Outcome cmd_barrier(const BarrierConfig& config) {
    using namespace barriers;
    const auto geo = config.shape_norm == 0.0 ? geom::CollarGeometry::flat_half_space(config.n)
                                              : geom::CollarGeometry::with_shape_norm(config.n, config.shape_norm);
    BarrierReport report;
    json extra = nullptr;
    if (config.kind == "lower_hk") {
        report = verify_lower_barrier(BarrierProfile::lower_hk(config.n, config.k, config.delta.value_or(0.01)), geo);
    } else if (config.kind == "upper_hbar") {
        report = upper_barrier_check(BarrierProfile::upper_hbar(config.n, config.delta.value_or(0.01)), geo);
    } else if (config.kind == "subsolution") {
        const PsiProfile psi = [s = config.psi_sup](double) { return s; };
        const auto fam = symfun::OperatorFamily::sigma_k_root(config.n, config.order);
        BarrierProfile p;
        if (config.tau) {
            // Validates n tau + 2 - 2n > 0 and tau >= 2 before any collar work.
            (void)BarrierProfile::subsolution_tau(config.n, 10.0, 0.1, config.eps, config.psi_sup, *config.tau);
        }
        if (config.delta) {
            const double k = std::max(config.k, 1.0 / *config.delta);
            p = config.tau ? BarrierProfile::subsolution_tau(config.n, k, *config.delta, config.eps, config.psi_sup,
                                                             *config.tau)
                           : BarrierProfile::subsolution(config.n, k, *config.delta, config.eps, config.psi_sup);
        } else {
            p = subsolution_regime(config.n, config.eps, config.psi_sup, config.k, config.tau, psi, geo);
        }
        report = verify_subsolution(p, fam, psi, geo);

        BarrierProfile limit = p;
        limit.k = std::numeric_limits<double>::infinity();
        std::vector<double> ds;
        for (int j = 0; j < 8; ++j) ds.push_back(p.delta * 1e-3 * std::ldexp(1.0, -j));
        const auto fit = fit_subsolution_offset(limit, ds);
        extra = json{{"offset_limit", fit.limit}, {"offset_extrapolated", fit.extrapolated}, {"offset_rate", fit.rate}};
    } else {
        throw DomainError(condition::kRange,
                          "unknown barrier kind '" + config.kind + "' (expected lower_hk, upper_hbar or subsolution)");
    }

    write_atomic(config.output, to_json(report));
    json summary{{"command", "barrier"},
                 {"profile", report.profile},
                 {"pass", report.pass},
                 {"min_slack", number_or_null(report.min_slack)},
                 {"delta_threshold", optional_json(report.delta_threshold)},
                 {"output", config.output.string()}};
    if (!extra.is_null()) summary["offset"] = extra;
    if (!report.failures.empty()) summary["failures"] = report.failures;
    return finish(report.pass ? kExitPass : kExitFail, summary, {config.output});
}

// ---------------------------------------------------------------- solve

namespace {

geom::Background make_background(const SolveConfig& c, int n) {
    switch (geom::parse_background_kind(c.background)) {
        case geom::BackgroundKind::euclidean_ball:
            return geom::Background::euclidean_ball(n, c.outer.value_or(1.0));
        case geom::BackgroundKind::euclidean_annulus:
            return geom::Background::euclidean_annulus(n, c.inner.value_or(0.5), c.outer.value_or(1.0));
        case geom::BackgroundKind::hyperbolic_ball:
            return geom::Background::hyperbolic_ball(n, c.outer.value_or(1.0), c.curvature.value_or(-1.0));
        case geom::BackgroundKind::round_sphere_band: {
            const double half = std::numbers::pi / 2.0;
            return geom::Background::round_sphere_band(n, c.inner.value_or(half - 0.7), c.outer.value_or(half + 0.7),
                                                       c.curvature.value_or(1.0));
        }
    }
    throw DomainError(condition::kRange, "unknown background");
}

geom::Mode make_mode(const SolveConfig& c) {
    if (c.mode == "einstein") return geom::Mode::einstein();
    if (c.mode == "schouten") {
        if (!c.tau) throw DomainError(condition::kRange, "--tau is required in schouten mode");
        return geom::Mode::schouten(*c.tau);
    }
    throw DomainError(condition::kRange, "unknown mode '" + c.mode + "' (expected einstein or schouten)");
}

solver::ProblemSpec make_spec(const SolveConfig& c) {
    const auto fam = make_family(c.family);
    solver::ProblemSpec spec{make_background(c, fam.n), fam, make_mode(c), {}, 0.0, std::nullopt};
    require(c.psi > 0.0 && std::isfinite(c.psi), "--psi must be positive");
    if (c.psi_inner) {
        require(*c.psi_inner > 0.0 && std::isfinite(*c.psi_inner), "--psi-inner must be positive");
        const double a = spec.bg.inner;
        const double b = spec.bg.outer;
        spec.psi = [a, b, lo = *c.psi_inner, hi = c.psi](double r) { return lo + (hi - lo) * (r - a) / (b - a); };
    } else {
        spec.psi = [v = c.psi](double) { return v; };
    }
    (void)solver::validate(spec);
    return spec;
}

json config_json(const SolveConfig& c, const solver::ProblemSpec& spec, std::size_t grid_size) {
    return json{{"n", spec.n()},
                {"family", spec.fam.name()},
                {"k", spec.fam.k},
                {"l", spec.fam.l},
                {"mode", spec.mode.name()},
                {"tau", optional_json(c.tau)},
                {"background", spec.bg.name()},
                {"inner", spec.bg.inner},
                {"outer", spec.bg.outer},
                {"curvature", spec.bg.curvature},
                {"psi", c.psi},
                {"psi_inner", optional_json(c.psi_inner)},
                {"grid", c.grid},
                {"grid_size", grid_size},
                {"k_list", c.k_list},
                {"max_iterations", c.max_iterations}};
}

struct SolveRun {
    json summary;
    std::vector<std::filesystem::path> files;
    bool completed = false;
    std::optional<solver::AsymptoticFit> fit;
};

SolveRun run_solve(const SolveConfig& c) {
    const auto spec = make_spec(c);
    const auto ks = solver::parse_k_list(c.k_list);
    const solver::Discretization disc(spec, solver::Grid1D::graded(spec.bg, c.grid));
    const auto& nodes = disc.grid().nodes;
    require(c.max_iterations >= 1, "--max-iterations must be at least 1");
    solver::ContinuationOptions options;
    options.newton.max_iterations = c.max_iterations;
    auto res = solver::continuation(disc, ks, options);

    SolveRun run;
    json records = json::array();
    double margin = std::numeric_limits<double>::infinity();
    long long trace_failures = 0;
    for (auto& rec : res.records) {
        try {
            rec.asymptotic_estimate = solver::asymptotic_extract(disc, rec.u, rec.k).limit_estimate;
        } catch (const DomainError&) {
            rec.asymptotic_estimate.reset();
        }
        records.push_back(json::parse(solver::to_json(rec, disc.size())));
        margin = std::min(margin, rec.ellipticity_margin);
        trace_failures += rec.trace_inequality_failures;
        if (c.write_csv) {
            const auto path = c.output_dir / ("u_k" + k_label(rec.k) + ".csv");
            write_atomic(path, solver::to_csv(disc, rec.u));
            run.files.push_back(path);
        }
    }

    json& s = run.summary;
    s["command"] = "solve";
    s["config"] = config_json(c, spec, disc.size());
    s["completed"] = res.ok();
    s["failure"] = res.ok() ? json(nullptr)
                            : json{{"k", ks[*res.failure_index]}, {"message", res.failure_message}};
    s["records"] = records;
    s["monotone"] = res.monotone;
    s["worst_monotone_violation"] = res.worst_monotone_violation;
    s["below_supersolution"] = optional_json(res.below_supersolution);
    s["worst_supersolution_violation"] = res.worst_supersolution_violation;
    s["interior_change"] = res.interior_change;
    s["min_ellipticity_margin"] = number_or_null(margin);
    s["trace_inequality_failures"] = trace_failures;

    s["asymptotic"] = nullptr;
    s["asymptotic_note"] = nullptr;
    s["exact_error"] = nullptr;
    s["exact_error_radius"] = nullptr;
    if (!res.u_infinity.empty()) {
        if (c.write_csv) {
            const auto path = c.output_dir / "u_infinity.csv";
            write_atomic(path, solver::to_csv(disc, res.u_infinity));
            run.files.push_back(path);
        }
        try {
            const auto fit = solver::asymptotic_extract(disc, res.u_infinity, ks.back());
            s["asymptotic"] = json{{"limit_estimate", fit.limit_estimate}, {"target", fit.target},
                                   {"deviation", fit.deviation()},    {"slope", fit.slope},
                                   {"fit_residual", fit.fit_residual}, {"nodes_used", fit.nodes_used}};
            run.fit = fit;
        } catch (const DomainError& e) {
            s["asymptotic_note"] = e.what();
        }
        // Balls with constant psi have the complete model as exact solution.
        if (!spec.bg.has_inner_boundary() && !c.psi_inner) {
            const auto exact = solver::ModelProfile::complete(spec.bg, spec.mode.target_constant(spec.n()), c.psi);
            const double radius = 0.8 * spec.bg.outer;
            double err = 0.0;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i] <= radius) err = std::max(err, std::abs(res.u_infinity[i] - exact.value(nodes[i])));
            }
            s["exact_error"] = err;
            s["exact_error_radius"] = radius;
        }
    }
    run.completed = res.ok();
    const auto path = c.output_dir / "summary.json";
    write_atomic(path, s.dump(2) + "\n");
    run.files.push_back(path);
    return run;
}

}  // namespace

Outcome cmd_solve(const SolveConfig& config) {
    auto run = run_solve(config);
    const json& s = run.summary;
    json line{{"command", "solve"},
              {"completed", s["completed"]},
              {"records", s["records"].size()},
              {"monotone", s["monotone"]},
              {"asymptotic", s["asymptotic"]},
              {"exact_error", s["exact_error"]},
              {"output", (config.output_dir / "summary.json").string()}};
    if (!run.completed) line["failure"] = s["failure"];
    return finish(run.completed ? kExitPass : kExitNonconvergence, line, std::move(run.files));
}

Outcome cmd_asymptotics(const SolveConfig& config, double tolerance) {
    if (config.mode == "schouten" && config.tau && *config.tau < 2.0) {
        // The ellipticity conditions are checked first so the message names the
        // condition that actually fails.
        (void)make_spec(config);
        throw DomainError(condition::kTauAtLeastTwo, "boundary asymptotics in schouten mode need tau >= 2");
    }
    require(tolerance > 0.0, "--tolerance must be positive");
    SolveConfig c = config;
    c.write_csv = false;
    auto run = run_solve(c);
    json out{{"command", "asymptotics"},
             {"config", run.summary["config"]},
             {"completed", run.completed},
             {"asymptotic", run.summary["asymptotic"]},
             {"asymptotic_note", run.summary["asymptotic_note"]},
             {"tolerance", tolerance}};
    bool pass = false;
    if (run.fit) pass = std::abs(run.fit->deviation()) <= tolerance;
    out["pass"] = pass;
    const auto path = config.output_dir / "asymptotics.json";
    write_atomic(path, out.dump(2) + "\n");
    run.files.push_back(path);
    json line{{"command", "asymptotics"}, {"pass", pass}, {"asymptotic", out["asymptotic"]}, {"output", path.string()}};
    int code = pass ? kExitPass : kExitFail;
    if (!run.completed) code = kExitNonconvergence;
    return finish(code, line, std::move(run.files));
}

// ---------------------------------------------------------------- selftest

Outcome cmd_selftest(const SelftestConfig& config) {
    require(config.samples > 0, "--samples must be positive");
    json checks = json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool pass, json detail) {
        all = all && pass;
        checks.push_back(json{{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
    };

    // Scalar and AVX2 sigma kernels must agree bit for bit.
    if (kernels::cpu_has_avx2()) {
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> gauss;
        bool same = true;
        for (int n = 1; n <= 8; ++n) {
            const std::size_t count = 37;
            std::vector<double> lambda(static_cast<std::size_t>(n) * count);
            for (double& x : lambda) x = gauss(rng);
            std::vector<double> a((n + 1) * count), b((n + 1) * count);
            kernels::scalar::esf_batch(n, count, lambda.data(), a.data());
            kernels::avx2::esf_batch(n, count, lambda.data(), b.data());
            same = same && a == b;
            std::vector<double> ea(n * n * count), eb(n * n * count);
            kernels::scalar::esf_excluding_batch(n, count, lambda.data(), ea.data());
            kernels::avx2::esf_excluding_batch(n, count, lambda.data(), eb.data());
            same = same && ea == eb;
        }
        record("kernel_equivalence", same, "scalar vs avx2, n = 1..8");
    } else {
        record("kernel_equivalence", true, "avx2 unavailable; scalar only");
    }

    for (int n = 3; n <= 5; ++n) {
        for (int k = 1; k <= n; ++k) {
            const int kappa = symfun::kappa_of_cone(symfun::ConeSpec::garding(n, k));
            record("kappa_gamma_" + std::to_string(n) + "_" + std::to_string(k), kappa == n - k,
                   json{{"kappa", kappa}, {"expected", n - k}});

            const auto fam = symfun::OperatorFamily::sigma_k_root(n, k);
            const auto r = symfun::structural_selftest(fam, config.samples, config.seed);
            record("structure_sigma_k_root_" + std::to_string(n) + "_" + std::to_string(k), r.pass(),
                   json{{"samples", r.samples},
                        {"concavity_failures", r.concavity_failures},
                        {"homogeneity_failures", r.homogeneity_failures},
                        {"trace_failures", r.trace_failures},
                        {"gradient_sum_failures", r.gradient_sum_failures},
                        {"lemma21_failures", r.lemma21_failures}});
        }
        const auto q = symfun::OperatorFamily::sigma_quotient(n, n - 1, 1);
        const auto rq = symfun::structural_selftest(q, config.samples, config.seed);
        record("structure_sigma_quotient_" + std::to_string(n) + "_" + std::to_string(n - 1) + "_1", rq.pass(),
               json{{"samples", rq.samples}});
    }

    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) {
        for (double rho : {-1.0, 0.5, 1.0, 1.5}) {
            worst = std::max(worst, std::abs(symfun::q_determinant(n, rho) - symfun::q_determinant_closed_form(n, rho)));
        }
    }
    record("det_q_closed_form", worst <= 1e-12, json{{"max_abs_error", worst}});

    json out{{"command", "selftest"}, {"isa", std::string(kernels::isa_name(kernels::active_isa()))},
             {"pass", all}, {"checks", checks}};
    write_atomic(config.output, out.dump(2) + "\n");
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c["pass"].get<bool>() ? 0 : 1;
    json line{{"command", "selftest"}, {"pass", all}, {"checks", checks.size()}, {"failed", failed},
              {"output", config.output.string()}};
    return finish(all ? kExitPass : kExitFail, line, {config.output});
}

}  // namespace confcurv::cli
