#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "confcurv/cli/output.hpp"
#include "confcurv/symfun/family.hpp"

namespace confcurv::cli {

// Each command validates its configuration through the owning module (which
// throws DomainError on a violated precondition), runs, writes its JSON
// atomically and returns the exit code plus a one-line JSON summary for
// stdout. The front end maps DomainError to exit 2.

struct FamilyOptions {
    std::string family = "sigma_k_root";  // or sigma_quotient
    int n = 3;
    std::optional<int> k;  // required
    int l = 0;             // sigma_quotient denominator order
};

/// Throws DomainError for a missing order, an unknown family name or
/// parameters the family rejects.
[[nodiscard]] symfun::OperatorFamily make_family(const FamilyOptions& options);

struct Outcome {
    int exit_code = kExitPass;
    std::string summary;
    std::vector<std::filesystem::path> files;
};

struct ConeConfig {
    FamilyOptions family;
    long long samples = 100000;
    std::uint64_t seed = 1;
    bool fully_uniform = false;
    double rho = 1.0;
    std::filesystem::path output = "cone.json";
};

/// Ellipticity report of the family's cone. Exit 0 iff every sampled check
/// passes. A fully-uniform request on Gamma_n or at a singular or out-of-range
/// rho is a validation error.
[[nodiscard]] Outcome cmd_cone(const ConeConfig& config);

struct BarrierConfig {
    std::string kind = "lower_hk";  // lower_hk, upper_hbar, subsolution
    int n = 3;
    double k = 1.0;
    std::optional<double> delta;  // subsolution: bisected when absent
    double eps = 0.1;
    std::optional<double> tau;    // subsolution: Schouten variant
    double psi_sup = 1.0;
    double shape_norm = 0.0;      // 0 is the flat half-space
    int order = 1;                // sigma_k_root order tested by subsolution
    std::filesystem::path output = "barrier.json";
};

/// Collar verification of one barrier profile. Exit 0 iff it passes.
[[nodiscard]] Outcome cmd_barrier(const BarrierConfig& config);

struct SolveConfig {
    FamilyOptions family;
    std::string mode = "einstein";  // or schouten
    std::optional<double> tau;
    std::string background = "euclidean_ball";
    std::optional<double> inner;
    std::optional<double> outer;
    std::optional<double> curvature;
    double psi = 1.0;                 // value at the outer boundary (constant by default)
    std::optional<double> psi_inner;  // value at the inner boundary or centre; linear in r between
    int grid = 512;
    std::string k_list = "2:1024:x2";
    int max_iterations = 50;  // Newton iterations per k
    std::filesystem::path output_dir = ".";
    bool write_csv = true;
};

/// Continuation over the k-list. Writes u_k<k>.csv per solved k,
/// u_infinity.csv and summary.json (records, monotonicity, supersolution
/// bound, asymptotic fit and, on balls with constant psi, the error against
/// the exact complete solution). Exit 3 when a solve fails; outputs up to
/// that point are kept.
[[nodiscard]] Outcome cmd_solve(const SolveConfig& config);

/// cmd_solve followed by the boundary fit; writes asymptotics.json. Exit 0 iff
/// |deviation| <= tolerance. Schouten mode needs tau >= 2 (validated first).
[[nodiscard]] Outcome cmd_asymptotics(const SolveConfig& config, double tolerance);

struct SelftestConfig {
    long long samples = 2000;
    std::uint64_t seed = 7;
    std::filesystem::path output = "selftest.json";
};

/// Kernel equivalence, structural properties of the families, det Q and
/// kappa checks. Exit 0 iff all pass.
[[nodiscard]] Outcome cmd_selftest(const SelftestConfig& config);

}  // namespace confcurv::cli
