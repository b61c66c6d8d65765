#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "confcurv/barriers/profile.hpp"
#include "confcurv/barriers/verify.hpp"
#include "confcurv/error.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace confcurv;
using namespace confcurv::barriers;

namespace {

const PsiProfile kPsiOne = [](double) { return 1.0; };

// Positive root of x^2 + b x - c = 0.
double quadratic_root(double b, double c) { return 0.5 * (-b + std::sqrt(b * b + 4.0 * c)); }

std::string condition_of(const auto& fn) {
    try {
        fn();
    } catch (const DomainError& e) {
        return e.condition();
    }
    return "";
}

}  // namespace

TEST_CASE("lower_hk closed-form identities") {
    for (double k : {1.0, 7.0, 100.0}) {
        for (double delta : {0.01, 0.3}) {
            const auto p = BarrierProfile::lower_hk(3, k, delta);
            CHECK(eval_profile(p, 0.0).h == doctest::Approx(std::log(k)).epsilon(1e-15));
            for (int i = 0; i < 50; ++i) {
                const double d = delta * i / 49.0;
                const auto v = eval_profile(p, d);
                CHECK(std::abs(v.hpp - v.hp * v.hp) <= 1e-13 * v.hpp);
                const double inv4 = std::pow(delta, -4.0);
                CHECK(std::abs(v.hp * v.hp * std::exp(-2.0 * v.h) - inv4) <= 1e-13 * inv4);
            }
            CHECK(eval_profile(p, delta).h <= std::log(delta) + 1e-15);
        }
    }
}

TEST_CASE("lower_hk is nondecreasing in k") {
    for (double d : {0.0, 1e-4, 5e-3, 1e-2}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double k = 1.0; k <= 1e4; k *= 3.0) {
            const double h = eval_profile(BarrierProfile::lower_hk(4, k, 0.01), d).h;
            CHECK(h >= prev);
            prev = h;
        }
    }
}

TEST_CASE("profile domains and parameter validation") {
    const auto lower = BarrierProfile::lower_hk(3, 2.0, 0.1);
    CHECK(condition_of([&] { (void)eval_profile(lower, 0.2); }) == condition::kProfileDomain);
    CHECK(condition_of([&] { (void)eval_profile(lower, -1e-9); }) == condition::kProfileDomain);
    const auto sub = BarrierProfile::subsolution(3, 20.0, 0.1, 0.1, 1.0);
    CHECK(condition_of([&] { (void)eval_profile(sub, 0.1); }) == condition::kProfileDomain);
    CHECK(condition_of([] { (void)BarrierProfile::subsolution(3, 5.0, 0.1, 0.1, 1.0); }) == condition::kProfileParams);
    CHECK(condition_of([] { (void)BarrierProfile::subsolution(3, 50.0, 0.1, 1.0, 1.0); }) == condition::kProfileParams);
    CHECK(condition_of([] { (void)BarrierProfile::subsolution_tau(3, 50.0, 0.1, 0.1, 1.0, 4.0 / 3.0); }) ==
          condition::kTauPositivity);
    CHECK(condition_of([] { (void)BarrierProfile::subsolution_tau(4, 50.0, 0.1, 0.1, 1.0, 1.9); }) ==
          condition::kTauAtLeastTwo);
    CHECK(condition_of([] { (void)BarrierProfile::upper_hbar(2, 0.1); }) == condition::kDimension);
}

TEST_CASE("subsolution value at the boundary") {
    const double eps = 0.1;
    const double psi = 2.0;
    const auto p = BarrierProfile::subsolution(5, 300.0, 0.01, eps, psi);
    const double expect = std::log(300.0) + 0.5 * std::log((1 - eps) * (1 - eps) * 4.0 * 3.0 / (2.0 * (psi + eps)));
    CHECK(eval_profile(p, 0.0).h == doctest::Approx(expect).epsilon(1e-14));
    // Derivatives against central differences.
    const double d = 3e-3;
    const double step = 1e-6;
    const auto v = eval_profile(p, d);
    const auto vp = eval_profile(p, d + step);
    const auto vm = eval_profile(p, d - step);
    CHECK(v.hp == doctest::Approx((vp.h - vm.h) / (2 * step)).epsilon(1e-7));
    CHECK(v.hpp == doctest::Approx((vp.hp - vm.hp) / (2 * step)).epsilon(1e-7));
}

TEST_CASE("lower barrier on the flat half-space") {
    // Shape term zero: U[h_k] = (n-1)/2 h'^2 g, so the normalized slack is 3 exactly.
    for (int n : {3, 4, 6}) {
        for (double k : {1.0, 10.0, 100.0}) {
            for (double delta : {1e-3, 0.01, 0.5, 1.0}) {
                const auto r = verify_lower_barrier(BarrierProfile::lower_hk(n, k, delta),
                                                    geom::CollarGeometry::flat_half_space(n));
                CHECK(r.pass);
                CHECK(r.min_slack == doctest::Approx(3.0).epsilon(1e-12));
                REQUIRE(r.delta_threshold);
                CHECK(*r.delta_threshold == kDeltaCap);
            }
        }
    }
}

TEST_CASE("lower barrier threshold with a unit shape term") {
    // Largest eigenvalue of the shape term is 1, so the check reduces to
    // 3(n-1)/8 k/(k d + delta^2) >= 1 at the largest grid point d = 0.95 delta.
    const int n = 3;
    const auto geo = geom::CollarGeometry::with_shape_norm(n, 1.0);
    for (double k : {1.0, 100.0}) {
        const double c = 3.0 * (n - 1) / 8.0;
        const double expect = quadratic_root(0.95 * k, c * k);
        const auto r = verify_lower_barrier(BarrierProfile::lower_hk(n, k, 0.01), geo);
        CHECK(r.pass);
        REQUIRE(r.delta_threshold);
        CHECK(*r.delta_threshold == doctest::Approx(expect).epsilon(1e-9));
        const auto over = verify_lower_barrier(BarrierProfile::lower_hk(n, k, expect * 1.05), geo);
        CHECK_FALSE(over.pass);
        CHECK_FALSE(over.failures.empty());
    }
}

TEST_CASE("upper barrier trace") {
    // Flat: tr U = (n-1)(hbar'' + (n-2)/2 hbar'^2) = -(n-1)/(2(n-2)(delta^2+d)^2); normalized slack 1.
    for (int n : {3, 5}) {
        const auto r = upper_barrier_check(BarrierProfile::upper_hbar(n, 1e-3), geom::CollarGeometry::flat_half_space(n));
        CHECK(r.pass);
        CHECK(r.min_slack == doctest::Approx(1.0).epsilon(1e-12));
        const auto curved =
            upper_barrier_check(BarrierProfile::upper_hbar(n, 1e-3), geom::CollarGeometry::with_shape_norm(n, 1.0));
        CHECK(curved.pass);
    }
    // Trace identity against the assembled tensor.
    const auto p = BarrierProfile::upper_hbar(4, 0.05);
    const auto geo = geom::CollarGeometry::with_shape_norm(4, 0.7);
    for (double d : {0.0, 0.01, 0.05}) {
        const auto v = eval_profile(p, d);
        const auto dp = geo.at(d);
        const double tr = geom::U_of_profile(v.hp, v.hpp, dp.grad_sq(), dp.shape_term(), dp.conormal()).trace();
        const double formula = v.hp * dp.laplacian() + (v.hpp + 0.5 * 2.0 * v.hp * v.hp) * dp.grad_sq();
        CHECK(tr / 3.0 == doctest::Approx(formula).epsilon(1e-13));
    }
    // Delta d = 1: 2 (delta^2 + d) <= 1 at d = 0.95 delta.
    const auto r = upper_barrier_check(BarrierProfile::upper_hbar(3, 0.01), geom::CollarGeometry::with_shape_norm(3, 1.0));
    REQUIRE(r.delta_threshold);
    CHECK(*r.delta_threshold == doctest::Approx(quadratic_root(0.95, 0.5)).epsilon(1e-9));
}

TEST_CASE("delta_eps bisection") {
    // Einstein case with unit shape term: condition (3) binds,
    // eps (n-1)/2 / (1.95 delta) >= 1.
    const int n = 3;
    const double eps = 0.1;
    const auto geo = geom::CollarGeometry::with_shape_norm(n, 1.0);
    CHECK(bisect_delta_eps(eps, n - 1.0, 1.0, kPsiOne, geo) ==
          doctest::Approx(eps * (n - 1) / (2.0 * 1.95)).epsilon(1e-9));
    CHECK(bisect_delta_eps(eps, n - 1.0, 1.0, kPsiOne, geom::CollarGeometry::flat_half_space(n)) == kDeltaCap);
    CHECK(first_failed_delta_condition(0.2, eps, n - 1.0, 1.0, kPsiOne, geo) == 3);
    const PsiProfile hot = [](double d) { return 1.0 + 0.5 * (1.0 - d); };
    CHECK(first_failed_delta_condition(0.01, eps, n - 1.0, 1.0, hot, geo) == 4);
}

TEST_CASE("subsolution on the flat half-space") {
    const auto fam = symfun::OperatorFamily::sigma_k_root(3, 1);
    const auto p = BarrierProfile::subsolution(3, 200.0, 0.01, 0.1, 1.0);
    const auto r = verify_subsolution(p, fam, kPsiOne, geom::CollarGeometry::flat_half_space(3));
    CHECK(r.pass);
    CHECK(r.failures.empty());
    CHECK(r.min_slack > 0.0);
    CHECK(r.grid_size == kCollarGridSize);
}

TEST_CASE("subsolution regimes across families and collars") {
    const double eps = 0.1;
    for (int n : {3, 4, 5}) {
        for (double s : {0.0, 1.0, 5.0}) {
            const auto geo = geom::CollarGeometry::with_shape_norm(n, s);
            for (int k = 1; k <= n; ++k) {
                const auto fam = symfun::OperatorFamily::sigma_k_root(n, k);
                for (double kreq : {1.0, 1e4}) {
                    const auto p = subsolution_regime(n, eps, 1.0, kreq, std::nullopt, kPsiOne, geo);
                    CHECK(p.k >= 1.0 / p.delta);
                    const auto r = verify_subsolution(p, fam, kPsiOne, geo);
                    CHECK_MESSAGE(r.pass, "n=" << n << " s=" << s << " k=" << k);
                }
            }
        }
    }
}

TEST_CASE("tau subsolution") {
    const auto fam = symfun::OperatorFamily::sigma_k_root(4, 2);
    for (double s : {0.0, 1.0}) {
        const auto geo = geom::CollarGeometry::with_shape_norm(4, s);
        const auto p = subsolution_regime(4, 0.1, 1.0, 1.0, 2.0, kPsiOne, geo);
        CHECK(p.kind == ProfileKind::subsolution_keps_tau);
        const auto r = verify_subsolution(p, fam, kPsiOne, geo);
        CHECK(r.pass);
    }
    const auto geo3 = geom::CollarGeometry::flat_half_space(3);
    CHECK(condition_of([&] { (void)subsolution_regime(3, 0.1, 1.0, 1.0, 4.0 / 3.0, kPsiOne, geo3); }) ==
          condition::kTauPositivity);
}

TEST_CASE("subsolution rejects delta above the collar threshold") {
    const auto geo = geom::CollarGeometry::with_shape_norm(3, 1.0);
    const auto p = BarrierProfile::subsolution(3, 100.0, 0.2, 0.1, 1.0);
    try {
        (void)verify_subsolution(p, symfun::OperatorFamily::sigma_k_root(3, 2), kPsiOne, geo);
        FAIL("expected rejection");
    } catch (const DomainError& e) {
        CHECK(std::string(e.condition()) == condition::kProfileParams);
        CHECK(std::string(e.what()).find("(3)") != std::string::npos);
    }
}

TEST_CASE("subsolution offset converges to the boundary constant") {
    for (int n : {3, 4}) {
        const double eps = 0.1;
        const double delta = 0.1;
        const auto p = BarrierProfile::subsolution(n, 1.0 / delta, delta, eps, 1.0);
        const double limit = 0.5 * std::log((1 - eps) * (1 - eps) * (n - 1.0) * (n - 2.0) / (2.0 * (1 + eps)));
        const std::vector<double> ds{1e-3, 1e-4, 1e-5};
        const auto fit = fit_subsolution_offset(p, ds);
        CHECK(fit.limit == doctest::Approx(limit).epsilon(1e-15));
        // offset - C = -d / (delta (d + delta)), so the rate is at most 1/delta^2 and
        // the linear extrapolation error is bounded by the quadratic term.
        CHECK(fit.rate <= 1.0 / (delta * delta));
        CHECK(std::abs(fit.extrapolated - limit) <= 1e-6 / (delta * delta * delta));
    }
}

TEST_CASE("barrier report JSON") {
    const auto r = verify_lower_barrier(BarrierProfile::lower_hk(3, 1.0, 0.01), geom::CollarGeometry::flat_half_space(3));
    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j.size() == 7);
    CHECK(j["profile"] == "lower_hk");
    CHECK(j["params"]["k"] == 1.0);
    CHECK(j["grid_size"] == 200);
    CHECK(j["pass"] == true);
    CHECK(j.contains("min_slack"));
    CHECK(j.contains("worst_d"));
    CHECK(j["delta_threshold"] == 1.0);
}
