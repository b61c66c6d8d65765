#include "confcurv/solver/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "confcurv/error.hpp"

namespace confcurv::solver {

namespace {

constexpr double kMinSpacingRatio = 0.9;

// Distance from the graded boundary at uniform parameter s in [0, 1].
double graded_distance(double extent, double beta, double s) { return extent * std::expm1(beta * s) / std::expm1(beta); }

}  // namespace

Grid1D Grid1D::graded(const geom::Background& bg, int m, std::optional<double> requested) {
    if (m < 32) throw DomainError(condition::kRange, "grid needs m >= 32 intervals, got " + std::to_string(m));
    const bool two_sided = bg.has_inner_boundary();
    // Adjacent spacings differ by e^{-grading / intervals}.
    const double intervals = two_sided ? m / 2 : m;
    const double limit = intervals * std::log(1.0 / kMinSpacingRatio);
    const double grading = requested.value_or(std::min(kDefaultGrading, limit));
    if (!(grading > 0.0)) throw DomainError(condition::kRange, "grid grading must be > 0");
    if (grading > limit * (1.0 + 1e-12)) {
        throw DomainError(condition::kRange, "grading " + std::to_string(grading) + " too strong for m=" +
                                                 std::to_string(m) + " (adjacent spacing ratio below 0.9)");
    }
    Grid1D g;
    g.grading = grading;
    g.centre_node = !bg.has_inner_boundary();
    g.nodes.resize(static_cast<std::size_t>(m) + 1);
    const double extent = bg.outer - bg.inner;
    if (g.centre_node) {
        for (int i = 0; i <= m; ++i) {
            g.nodes[static_cast<std::size_t>(i)] = bg.outer - graded_distance(extent, grading, 1.0 - double(i) / m);
        }
        g.nodes.front() = bg.inner;
    } else {
        if (m % 2 != 0) throw DomainError(condition::kRange, "two-sided grids need an even m");
        const int half = m / 2;
        for (int i = 0; i <= half; ++i) {
            const double d = graded_distance(0.5 * extent, grading, double(i) / half);
            g.nodes[static_cast<std::size_t>(i)] = bg.inner + d;
            g.nodes[static_cast<std::size_t>(m - i)] = bg.outer - d;
        }
        g.nodes[static_cast<std::size_t>(half)] = 0.5 * (bg.inner + bg.outer);
    }
    g.nodes.back() = bg.outer;
    return g;
}

double Grid1D::min_spacing_ratio() const {
    double worst = 1.0;
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const double a = nodes[i] - nodes[i - 1];
        const double b = nodes[i + 1] - nodes[i];
        worst = std::min(worst, std::min(a, b) / std::max(a, b));
    }
    return worst;
}

}  // namespace confcurv::solver
