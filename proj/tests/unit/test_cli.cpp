#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "confcurv/cli/app.hpp"
#include "confcurv/cli/output.hpp"
#include "confcurv/error.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using confcurv::cli::run;
using nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("confcurv_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

double exact_error(const fs::path& dir) { return load(dir / "summary.json")["exact_error"].get<double>(); }

}  // namespace

TEST_CASE("number parsing") {
    using confcurv::cli::parse_number;
    CHECK(parse_number("0.25", "x") == 0.25);
    CHECK(parse_number("4/3", "x") == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(parse_number("-1e-3", "x") == -1e-3);
    CHECK(std::isinf(parse_number("inf", "x")));
    for (const char* bad : {"", "abc", "1/0", "1/", "2x", "nan"}) {
        CHECK_THROWS_AS((void)parse_number(bad, "x"), confcurv::DomainError);
    }
}

TEST_CASE("cone command") {
    const auto dir = scratch("cone");
    auto r = invoke({"--output-dir", dir.string(), "cone", "--n", "4", "--family", "sigma_k_root", "--k", "2",
                     "--samples", "20000"});
    CHECK(r.code == 0);
    const json j = load(dir / "cone.json");
    CHECK(j["kappa"] == 2);
    for (const char* key : {"kappa", "vartheta_analytic", "vartheta_empirical", "sharpness_min_ratio", "sample_count",
                            "seed"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["vartheta_empirical"].get<double>() >= j["vartheta_analytic"].get<double>() - 1e-12);

    r = invoke({"--output-dir", dir.string(), "cone", "--n", "3", "--k", "3", "--samples", "5000"});
    CHECK(r.code == 0);
    const json p = load(dir / "cone.json");
    CHECK(p["kappa"] == 0);
    CHECK(p["note"].get<std::string>().find("skipped") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "cone", "--n", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--k") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "cone", "--n", "3", "--k", "3", "--fully-uniform"});
    CHECK(r.code == 2);
    CHECK(r.err.find("positive-cone") != std::string::npos);
    CHECK(r.err.find("Gamma != Gamma_n") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "cone", "--n", "4", "--k", "2", "--fully-uniform", "--rho", "4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("rho-singular") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "cone", "--n", "4", "--k", "2", "--fully-uniform", "--rho", "1.5",
                "--samples", "1000"});
    CHECK(r.code == 2);
    CHECK(r.err.find("rho-range") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "cone", "--n", "4", "--k", "2", "--fully-uniform", "--rho", "1",
                "--samples", "1000"});
    CHECK(r.code == 0);
    const json f = load(dir / "cone.json");
    // rho = 1: (1 - (1 - kappa vartheta)) / (n - 1).
    CHECK(f["fully_uniform"]["bound"].get<double>() ==
          doctest::Approx(2.0 * f["vartheta_analytic"].get<double>() / 3.0).epsilon(1e-14));

    CHECK(invoke({"cone", "--n", "3", "--k", "2", "--bogus"}).code == 2);
    CHECK(invoke({}).code == 2);
}

TEST_CASE("barrier command") {
    const auto dir = scratch("barrier");
    auto r = invoke({"--output-dir", dir.string(), "barrier", "--kind", "lower_hk", "--n", "3", "--delta", "0.01", "--k",
                     "1"});
    CHECK(r.code == 0);
    const json j = load(dir / "barrier.json");
    CHECK(j.size() == 7);
    CHECK(j["pass"] == true);
    CHECK(j["profile"] == "lower_hk");

    r = invoke({"--output-dir", dir.string(), "barrier", "--kind", "subsolution", "--tau", "2", "--n", "4"});
    CHECK(r.code == 0);
    const json s = json::parse(r.out);
    CHECK(s["pass"] == true);
    // Offset limit (1/2) log((1-eps)^2 (n tau + 2 - 2n) / (2 (1 + eps))).
    CHECK(s["offset"]["offset_limit"].get<double>() == doctest::Approx(0.5 * std::log(0.81 * 2.0 / 2.2)));

    r = invoke({"--output-dir", dir.string(), "barrier", "--kind", "subsolution", "--tau", "4/3", "--n", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("tau-positivity") != std::string::npos);
    CHECK(r.err.find("n*tau + 2 - 2n > 0") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "barrier", "--kind", "upper_hbar", "--n", "5", "--delta", "0.001"});
    CHECK(r.code == 0);
    r = invoke({"--output-dir", dir.string(), "barrier", "--kind", "nonsense"});
    CHECK(r.code == 2);
    r = invoke({"--output-dir", dir.string(), "barrier", "--kind", "lower_hk", "--n", "2"});
    CHECK(r.code == 2);
}

TEST_CASE("solve command") {
    const auto dir = scratch("solve");
    auto r = invoke({"--output-dir", dir.string(), "solve", "--mode", "einstein", "--n", "3", "--family",
                     "sigma_k_root", "--k", "2", "--psi", "1", "--k-list", "2:1024:x2"});
    REQUIRE(r.code == 0);
    const json s = load(dir / "summary.json");
    CHECK(s["completed"] == true);
    CHECK(s["records"].size() == 10);
    CHECK(s["monotone"] == true);
    CHECK(s["below_supersolution"] == true);
    CHECK(std::abs(s["asymptotic"]["limit_estimate"].get<double>()) <= 2e-2);
    CHECK(s["asymptotic"]["target"] == 0.0);
    CHECK(s["exact_error"].get<double>() <= 5e-3);
    for (const auto& rec : s["records"]) {
        CHECK(rec.size() == 7);
        CHECK(rec["admissible"] == true);
        CHECK(rec["grid_size"] == 513);
    }
    CHECK(fs::exists(dir / "u_k2.csv"));
    CHECK(fs::exists(dir / "u_k1024.csv"));
    CHECK(fs::exists(dir / "u_infinity.csv"));
    CHECK(slurp(dir / "u_k2.csv").rfind("r,d,u,residual,cone_slack\n", 0) == 0);

    // Schouten at tau = 1 violates both tau conditions.
    r = invoke({"--output-dir", dir.string(), "solve", "--mode", "schouten", "--tau", "1.0", "--n", "3", "--k", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("tau-ellipticity") != std::string::npos);
    CHECK(r.err.find("n*tau + 2 - 2n > 0") != std::string::npos);

    r = invoke({"--output-dir", dir.string(), "solve", "--n", "3", "--k", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("positive-cone") != std::string::npos);
    CHECK(invoke({"--output-dir", dir.string(), "solve", "--n", "3", "--k", "2", "--grid", "16"}).code == 2);
    CHECK(invoke({"--output-dir", dir.string(), "solve", "--n", "3", "--k", "2", "--k-list", "2:8"}).code == 2);
    CHECK(invoke({"--output-dir", dir.string(), "solve", "--n", "3", "--k", "2", "--psi", "-1"}).code == 2);
}

TEST_CASE("solve grid refinement") {
    const auto a = scratch("grid64");
    const auto b = scratch("grid128");
    REQUIRE(invoke({"--output-dir", a.string(), "solve", "--n", "3", "--k", "2", "--grid", "64"}).code == 0);
    REQUIRE(invoke({"--output-dir", b.string(), "solve", "--n", "3", "--k", "2", "--grid", "128"}).code == 0);
    CHECK(exact_error(a) / exact_error(b) >= 3.5);
}

TEST_CASE("solve keeps partial output on failure") {
    const auto dir = scratch("partial");
    // e^{2u} overflows at the second boundary value.
    const auto r = invoke({"--output-dir", dir.string(), "solve", "--n", "3", "--k", "2", "--grid", "128", "--k-list",
                           "2:1e300:x1e299"});
    CHECK(r.code == 3);
    const json s = load(dir / "summary.json");
    CHECK(s["completed"] == false);
    CHECK(s["records"].size() == 1);
    CHECK(s["failure"]["message"].get<std::string>().rfind("k=2e+299", 0) == 0);
    CHECK(fs::exists(dir / "u_k2.csv"));
}

TEST_CASE("identical configuration gives identical bytes") {
    const auto a = scratch("same_a");
    const auto b = scratch("same_b");
    const std::vector<std::string> solve{"solve", "--n", "4", "--k", "2", "--grid", "128", "--k-list", "2:64:x2"};
    auto with_dir = [](const fs::path& d, std::vector<std::string> args) {
        args.insert(args.begin(), {"--output-dir", d.string()});
        return args;
    };
    REQUIRE(invoke(with_dir(a, solve)).code == 0);
    REQUIRE(invoke(with_dir(b, solve)).code == 0);
    const std::vector<std::string> cone{"cone", "--n", "4", "--k", "2", "--samples", "5000", "--seed", "11"};
    REQUIRE(invoke(with_dir(a, cone)).code == 0);
    REQUIRE(invoke(with_dir(b, cone)).code == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared == 9);  // 6 CSVs per k, u_infinity, summary, cone
}

TEST_CASE("asymptotics command") {
    const auto dir = scratch("asym");
    auto r = invoke({"--output-dir", dir.string(), "asymptotics", "--mode", "schouten", "--tau", "2", "--n", "3", "--k",
                     "2"});
    CHECK(r.code == 0);
    const json j = load(dir / "asymptotics.json");
    CHECK(j["pass"] == true);
    CHECK(std::abs(j["asymptotic"]["deviation"].get<double>()) <= 2e-2);
    CHECK(!fs::exists(dir / "u_k2.csv"));

    r = invoke({"--output-dir", dir.string(), "asymptotics", "--mode", "schouten", "--tau", "1.9", "--n", "5", "--k",
                "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("tau-at-least-two") != std::string::npos);
    // Too coarse for the fit: reported, not thrown.
    r = invoke({"--output-dir", dir.string(), "asymptotics", "--n", "3", "--k", "2", "--grid", "32"});
    CHECK(r.code == 1);
    CHECK(load(dir / "asymptotics.json")["asymptotic_note"].is_string());
}

TEST_CASE("output directory from the environment") {
    const auto dir = scratch("env");
    ::setenv("CONFCURV_OUTPUT_DIR", (dir / "nested").c_str(), 1);
    const auto r = invoke({"barrier", "--kind", "upper_hbar", "--n", "3"});
    ::unsetenv("CONFCURV_OUTPUT_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "nested" / "barrier.json"));
    // Nothing is left behind from the atomic write.
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "nested")) ++files;
    CHECK(files == 1);
}

TEST_CASE("selftest command") {
    const auto dir = scratch("selftest");
    const auto r = invoke({"--output-dir", dir.string(), "selftest", "--samples", "300"});
    CHECK(r.code == 0);
    const json j = load(dir / "selftest.json");
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() > 20);
}
