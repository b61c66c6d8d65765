#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "confcurv/symfun/cone.hpp"

namespace confcurv::symfun {

/// Points strictly inside a cone, stored flat (point p occupies [p*n, p*n+n)),
/// each sorted ascending. Three sources are interleaved:
///   - Gaussian scatter around 1/n on the hyperplane sum = 1, by rejection;
///   - boundary rays (1-eps) lambda_b + eps * 1, with lambda_b found by
///     bisection along a random direction and eps log-uniform in [1e-10, 1];
///   - boundary points pushed up by large positive entries (ratios up to 1e6).
/// Chunk c of 1024 points draws from its own generator seeded by (seed, c), so
/// the output is independent of how callers partition the work.
[[nodiscard]] std::vector<double> sample_cone(const ConeSpec& cone, std::size_t count, std::uint64_t seed);

inline constexpr std::size_t kSampleChunk = 1024;

}  // namespace confcurv::symfun
