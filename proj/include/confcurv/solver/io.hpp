#pragma once

#include <optional>
#include <span>
#include <string>

#include "confcurv/solver/continuation.hpp"

namespace confcurv::solver {

/// {k, grid_size, newton_iters, residual_norm, admissible, min_cone_slack,
///  asymptotic_estimate}; non-finite numbers serialize as null.
[[nodiscard]] std::string to_json(const SolveRecord& record, std::size_t grid_size);

/// CSV with header "r,d,u,residual,cone_slack", one line per node. Residual and
/// slack come from evaluating `u`; when u is not admissible (or not finite)
/// those columns hold "nan".
[[nodiscard]] std::string to_csv(const Discretization& disc, std::span<const double> u);

}  // namespace confcurv::solver
