#include "confcurv/cli/app.hpp"

#include <optional>

#include "CLI11.hpp"
#include "confcurv/cli/commands.hpp"
#include "confcurv/error.hpp"

namespace confcurv::cli {

namespace {

void add_family_options(CLI::App* cmd, FamilyOptions& fam, std::optional<int>& k) {
    cmd->add_option("--n", fam.n, "dimension n >= 3")->capture_default_str();
    cmd->add_option("--family", fam.family, "sigma_k_root or sigma_quotient")->capture_default_str();
    cmd->add_option("--k", k, "operator order (sigma_k)");
    cmd->add_option("--l", fam.l, "denominator order for sigma_quotient")->capture_default_str();
}

std::optional<double> maybe_number(const std::optional<std::string>& text, const char* what) {
    if (!text) return std::nullopt;
    return parse_number(*text, what);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Complete conformal metrics of prescribed curvature: cone analysis, barriers and radial solver"};
    app.name("confcurv");
    app.require_subcommand(1);
    std::string output_dir = default_output_dir().string();
    app.add_option("--output-dir", output_dir, "directory for outputs (default $CONFCURV_OUTPUT_DIR or .)");

    // cone
    ConeConfig cone;
    std::optional<int> cone_k;
    std::string cone_rho = "1";
    std::optional<std::string> cone_output;
    auto* cone_cmd = app.add_subcommand("cone", "ellipticity constants of a Garding cone family");
    add_family_options(cone_cmd, cone.family, cone_k);
    cone_cmd->add_option("--samples", cone.samples, "sampled in-cone points")->capture_default_str();
    cone_cmd->add_option("--seed", cone.seed)->capture_default_str();
    cone_cmd->add_flag("--fully-uniform", cone.fully_uniform, "also report the fully uniform bound at --rho");
    cone_cmd->add_option("--rho", cone_rho, "transform parameter for --fully-uniform")->capture_default_str();
    cone_cmd->add_option("--output", cone_output, "report path (default <output-dir>/cone.json)");

    // barrier
    BarrierConfig barrier;
    std::string barrier_k = "1";
    std::optional<std::string> barrier_delta, barrier_tau, barrier_output;
    std::string barrier_eps = "0.1";
    auto* barrier_cmd = app.add_subcommand("barrier", "verify a barrier profile on a collar");
    barrier_cmd->add_option("--kind", barrier.kind, "lower_hk, upper_hbar or subsolution")->capture_default_str();
    barrier_cmd->add_option("--n", barrier.n)->capture_default_str();
    barrier_cmd->add_option("--k", barrier_k, "barrier parameter k (subsolution: raised to 1/delta)")
        ->capture_default_str();
    barrier_cmd->add_option("--delta", barrier_delta, "collar width (subsolution: bisected when absent)");
    barrier_cmd->add_option("--eps", barrier_eps)->capture_default_str();
    barrier_cmd->add_option("--tau", barrier_tau, "subsolution: modified Schouten parameter");
    barrier_cmd->add_option("--psi-sup", barrier.psi_sup)->capture_default_str();
    barrier_cmd->add_option("--shape-norm", barrier.shape_norm, "0 = flat half-space")->capture_default_str();
    barrier_cmd->add_option("--order", barrier.order, "subsolution: sigma_k_root order")->capture_default_str();
    barrier_cmd->add_option("--output", barrier_output, "report path (default <output-dir>/barrier.json)");

    // solve / asymptotics share the problem options
    SolveConfig solve;
    std::optional<int> solve_k;
    std::optional<std::string> solve_tau, solve_inner, solve_outer, solve_curv, solve_psi_inner;
    std::string solve_psi = "1";
    std::string tolerance = "2e-2";
    auto add_problem = [&](CLI::App* cmd) {
        add_family_options(cmd, solve.family, solve_k);
        cmd->add_option("--mode", solve.mode, "einstein or schouten")->capture_default_str();
        cmd->add_option("--tau", solve_tau, "modified Schouten parameter");
        cmd->add_option("--background", solve.background,
                        "euclidean_ball, euclidean_annulus, hyperbolic_ball or round_sphere_band")
            ->capture_default_str();
        cmd->add_option("--inner", solve_inner, "inner radius (two-sided backgrounds)");
        cmd->add_option("--outer", solve_outer, "outer radius");
        cmd->add_option("--curvature", solve_curv, "sectional curvature of curved backgrounds");
        cmd->add_option("--psi", solve_psi, "psi at the outer boundary (constant without --psi-inner)")
            ->capture_default_str();
        cmd->add_option("--psi-inner", solve_psi_inner, "psi at the inner boundary or centre, linear in r");
        cmd->add_option("--grid", solve.grid, "grid intervals m")->capture_default_str();
        cmd->add_option("--k-list", solve.k_list, "boundary data log k for k in start:end:xratio")
            ->capture_default_str();
        cmd->add_option("--max-iterations", solve.max_iterations, "Newton iterations per k")->capture_default_str();
    };
    auto* solve_cmd = app.add_subcommand("solve", "continuation in k toward the complete solution");
    add_problem(solve_cmd);
    auto* asym_cmd = app.add_subcommand("asymptotics", "solve, then fit u + log d at the boundary");
    add_problem(asym_cmd);
    asym_cmd->add_option("--tolerance", tolerance, "allowed |limit - target|")->capture_default_str();

    // selftest
    SelftestConfig selftest;
    std::optional<std::string> selftest_output;
    auto* selftest_cmd = app.add_subcommand("selftest", "structural checks of kernels and operator families");
    selftest_cmd->add_option("--samples", selftest.samples)->capture_default_str();
    selftest_cmd->add_option("--seed", selftest.seed)->capture_default_str();
    selftest_cmd->add_option("--output", selftest_output, "report path (default <output-dir>/selftest.json)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error [arguments]: " << e.what() << "\n";
        return kExitValidation;
    }

    const std::filesystem::path dir = output_dir;
    try {
        Outcome outcome;
        if (cone_cmd->parsed()) {
            cone.family.k = cone_k;
            cone.rho = parse_number(cone_rho, "--rho");
            cone.output = cone_output ? std::filesystem::path(*cone_output) : dir / "cone.json";
            outcome = cmd_cone(cone);
        } else if (barrier_cmd->parsed()) {
            barrier.k = parse_number(barrier_k, "--k");
            barrier.delta = maybe_number(barrier_delta, "--delta");
            barrier.tau = maybe_number(barrier_tau, "--tau");
            barrier.eps = parse_number(barrier_eps, "--eps");
            barrier.output = barrier_output ? std::filesystem::path(*barrier_output) : dir / "barrier.json";
            outcome = cmd_barrier(barrier);
        } else if (selftest_cmd->parsed()) {
            selftest.output = selftest_output ? std::filesystem::path(*selftest_output) : dir / "selftest.json";
            outcome = cmd_selftest(selftest);
        } else {
            solve.family.k = solve_k;
            solve.tau = maybe_number(solve_tau, "--tau");
            solve.inner = maybe_number(solve_inner, "--inner");
            solve.outer = maybe_number(solve_outer, "--outer");
            solve.curvature = maybe_number(solve_curv, "--curvature");
            solve.psi = parse_number(solve_psi, "--psi");
            solve.psi_inner = maybe_number(solve_psi_inner, "--psi-inner");
            solve.output_dir = dir;
            outcome = solve_cmd->parsed() ? cmd_solve(solve) : cmd_asymptotics(solve, parse_number(tolerance, "--tolerance"));
        }
        out << outcome.summary << "\n";
        return outcome.exit_code;
    } catch (const DomainError& e) {
        err << "error [" << e.condition() << "]: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NonconvergenceError& e) {
        err << "error [nonconvergence]: " << e.what() << "\n";
        return kExitNonconvergence;
    }
}

}  // namespace confcurv::cli
