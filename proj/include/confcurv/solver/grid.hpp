#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "confcurv/geom/background.hpp"

namespace confcurv::solver {

inline constexpr double kDefaultGrading = 5.0;

/// Radial nodes r_0 < ... < r_m, exponentially graded toward each blow-up
/// boundary. With d the distance to that boundary and L the radial extent,
/// d(s) = L (e^{beta s} - 1) / (e^beta - 1) on a uniform s grid, so adjacent
/// spacings differ by the factor e^{-beta/m}.
///
/// Balls (inner = 0) put node 0 at the centre with the symmetry condition
/// u'(0) = 0; annuli and bands mirror the grading from the midpoint and carry
/// Dirichlet nodes at both ends.
struct Grid1D {
    std::vector<double> nodes;
    double grading = kDefaultGrading;
    bool centre_node = true;

    /// Throws DomainError (range) for m < 32, odd m on two-sided domains, or an
    /// explicit grading whose adjacent spacing ratio would leave [0.9, 1]. The
    /// default grading is kDefaultGrading, reduced on small grids until the
    /// ratio fits.
    static Grid1D graded(const geom::Background& bg, int m, std::optional<double> grading = std::nullopt);

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
    [[nodiscard]] bool is_dirichlet(std::size_t i) const noexcept {
        return i + 1 == nodes.size() || (i == 0 && !centre_node);
    }
    /// min over adjacent pairs of (smaller spacing) / (larger spacing).
    [[nodiscard]] double min_spacing_ratio() const;
};

}  // namespace confcurv::solver
