#pragma once

// Batched elementary-symmetric-function kernels.
//
// Layout is structure-of-arrays: a batch of `count` vectors in R^n is stored
// row-major as lambda[i * count + s] (entry i of sample s), so the inner loop
// runs over samples and vectorizes across them. Every kernel has a scalar
// reference implementation and an AVX2 variant; `esf_batch` and friends
// dispatch at runtime to the best variant the CPU supports.

#include <cstddef>
#include <span>
#include <string_view>

namespace confcurv::kernels {

enum class Isa { scalar, avx2 };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

/// True when the running CPU can execute the AVX2 variants.
[[nodiscard]] bool cpu_has_avx2() noexcept;

/// ISA used by the dispatching entry points. Defaults to the best supported
/// one; the environment variable CONFCURV_SIMD=scalar forces the reference path.
[[nodiscard]] Isa active_isa() noexcept;

/// Override the dispatch choice (tests and benchmarks). Requesting avx2 on a
/// CPU without it falls back to scalar. Returns the ISA actually selected.
Isa set_active_isa(Isa isa) noexcept;

/// sigma[j * count + s] = sigma_j(lambda_s), j = 0..n. `sigma` holds (n+1)*count.
void esf_batch(int n, std::size_t count, std::span<const double> lambda, std::span<double> sigma);

/// out[(skip * n + j) * count + s] = sigma_j(lambda_s with entry `skip` removed),
/// j = 0..n-1, skip = 0..n-1. `out` holds n*n*count.
void esf_excluding_batch(int n, std::size_t count, std::span<const double> lambda, std::span<double> out);

namespace scalar {
void esf_batch(int n, std::size_t count, const double* lambda, double* sigma);
void esf_excluding_batch(int n, std::size_t count, const double* lambda, double* out);
}  // namespace scalar

namespace avx2 {
// Only call when cpu_has_avx2() is true.
void esf_batch(int n, std::size_t count, const double* lambda, double* sigma);
void esf_excluding_batch(int n, std::size_t count, const double* lambda, double* out);
}  // namespace avx2

}  // namespace confcurv::kernels
