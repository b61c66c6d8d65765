#include "confcurv/solver/io.hpp"

#include <cmath>
#include <sstream>

#include "confcurv/error.hpp"
#include "json.hpp"

namespace confcurv::solver {

namespace {

nlohmann::ordered_json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

std::string to_json(const SolveRecord& record, std::size_t grid_size) {
    nlohmann::ordered_json j;
    j["k"] = finite_or_null(record.k);
    j["grid_size"] = grid_size;
    j["newton_iters"] = record.newton_iters;
    j["residual_norm"] = finite_or_null(record.residual_norm);
    j["admissible"] = record.admissible;
    j["min_cone_slack"] = finite_or_null(record.min_cone_slack);
    j["asymptotic_estimate"] = record.asymptotic_estimate ? finite_or_null(*record.asymptotic_estimate) : nullptr;
    return j.dump(2) + "\n";
}

std::string to_csv(const Discretization& disc, std::span<const double> u) {
    std::optional<NodalState> st;
    bool finite = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!disc.grid().is_dirichlet(i) && !std::isfinite(u[i])) finite = false;
    }
    if (finite) {
        try {
            st = disc.evaluate(u);
        } catch (const DomainError&) {
        }
    }
    std::ostringstream os;
    os.precision(17);
    os << "r,d,u,residual,cone_slack\n";
    const auto& nodes = disc.grid().nodes;
    const auto& bg = disc.spec().bg;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        os << nodes[i] << ',' << bg.boundary_distance(nodes[i]) << ',' << u[i] << ',';
        if (st) {
            os << st->residual[i] << ',' << st->slack[i];
        } else {
            os << "nan,nan";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace confcurv::solver
